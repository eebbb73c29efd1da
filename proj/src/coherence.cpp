#include "cohere/coherence.hpp"

#include <stdexcept>

#include "cohere/errors.hpp"
#include "cohere/simplex.hpp"

namespace cohere {

namespace {

void collect_rule_symbols(const SupportRule& rule, std::set<Symbol>& out)
{
    if (const auto* g = std::get_if<GatedSupport>(&rule.rule))
    {
        auto s = g->gate.symbols();
        out.insert(s.begin(), s.end());
    }
    else if (const auto* c = std::get_if<CoincidenceSupport>(&rule.rule))
    {
        auto s = c->prevision.symbols();
        out.insert(s.begin(), s.end());
    }
    else if (const auto* u = std::get_if<UnionSupport>(&rule.rule))
    {
        for (const auto& part : u->parts)
            collect_rule_symbols(part, out);
    }
}

std::set<Symbol> symbols_used(const Crq& q)
{
    std::set<Symbol> out;
    for (const auto& p : q.payoffs())
    {
        auto s = p.symbols();
        out.insert(s.begin(), s.end());
    }
    collect_rule_symbols(q.support_rule(), out);
    out.insert(q.own_symbol());
    return out;
}

void assign(Valuation& v, const Symbol& s, const Rational& value)
{
    auto [it, inserted] = v.emplace(s, value);
    if (!inserted && it->second != value)
        throw InvalidAssessment("symbol '" + s.name() + "' assessed at both " + to_string(it->second) + " and "
                                + to_string(value));
}

}  // namespace

Assessment::Assessment(RegistryPtr registry, std::vector<AssessedItem> items, Valuation parameters)
    : registry_(std::move(registry)), items_(std::move(items)), parameters_(std::move(parameters))
{
    for (const auto& item : items_)
    {
        if (item.quantity.registry() != registry_)
            throw InvalidAssessment("'" + item.quantity.label() + "' belongs to a different registry");
        assign(valuation_, item.quantity.own_symbol(), item.value);
    }
    for (const auto& [s, v] : parameters_)
        assign(valuation_, s, v);

    // Solve links own = prevision(...) for a single remaining unknown, to a fixpoint.
    bool progress = true;
    while (progress)
    {
        progress = false;
        for (const auto& item : items_)
        {
            const Crq& q = item.quantity;
            if (!q.is_linked())
                continue;
            Polynomial residual = q.prevision().substitute(valuation_);
            auto unknowns = residual.symbols();
            if (unknowns.size() != 1)
                continue;
            const Symbol& s = *unknowns.begin();
            auto affine = residual.as_affine_in(s);
            if (!affine || affine->first == 0)
                continue;
            valuation_[s] = (item.value - affine->second) / affine->first;
            progress = true;
        }
    }
}

std::set<Symbol> Assessment::missing_symbols() const
{
    std::set<Symbol> out;
    for (const auto& item : items_)
    {
        for (const auto& s : symbols_used(item.quantity))
        {
            if (!valuation_.count(s))
                out.insert(s);
        }
    }
    return out;
}

bool Assessment::depends_on(const Symbol& s) const
{
    for (const auto& item : items_)
    {
        if (symbols_used(item.quantity).count(s))
            return true;
    }
    return false;
}

Assessment Assessment::extended(const Crq& q, const Rational& value) const
{
    auto items = items_;
    items.push_back(AssessedItem{q, value});
    return Assessment(registry_, std::move(items), parameters_);
}

std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t n)
{
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 1; k <= n; ++k)
    {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i)
            idx[i] = i;
        for (;;)
        {
            out.push_back(idx);
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + (i - 1))
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

std::vector<Rational> assessed_values(const Assessment& a, const std::vector<std::size_t>& subset)
{
    std::vector<Rational> m;
    m.reserve(subset.size());
    for (auto i : subset)
        m.push_back(a.items().at(i).value);
    return m;
}

PointTable build_points(const Assessment& a, const std::vector<std::size_t>& subset)
{
    if (subset.empty())
        throw PreconditionFailed("empty subfamily");
    for (std::size_t j = 0; j < subset.size(); ++j)
    {
        if (subset[j] >= a.size() || (j > 0 && subset[j] <= subset[j - 1]))
            throw PreconditionFailed("subfamily indices must be increasing and in range");
    }

    const Valuation& val = a.valuation();
    const std::size_t worlds = constituent_count(*a.registry());
    std::vector<TruthTable> active;
    TruthTable any(worlds);
    for (auto i : subset)
    {
        active.push_back(support(a.items()[i].quantity, val));
        any |= active.back();
    }
    if (any.none())
        throw EmptySupport("every bet of the subfamily is called off");

    PointTable t;
    t.subset = subset;
    t.dimension = subset.size();
    std::vector<std::vector<bool>> keys_active;

    for (std::size_t w = worlds; w-- > 0;)
    {
        if (!any[w])
            continue;
        std::vector<bool> on(subset.size());
        std::vector<Polynomial> sym(subset.size());
        for (std::size_t j = 0; j < subset.size(); ++j)
        {
            const Crq& q = a.items()[subset[j]].quantity;
            on[j] = active[j][w];
            sym[j] = on[j] ? q.payoffs()[w] : Polynomial::variable(q.own_symbol());
        }
        std::size_t h = 0;
        for (; h < t.constituents.size(); ++h)
        {
            if (keys_active[h] == on && t.symbolic_points[h] == sym)
                break;
        }
        if (h < t.constituents.size())
        {
            t.constituents[h][w] = true;
            continue;
        }
        std::vector<Rational> point(subset.size());
        for (std::size_t j = 0; j < subset.size(); ++j)
            point[j] = sym[j].evaluate(val);
        TruthTable cell(worlds);
        cell[w] = true;
        t.constituents.push_back(std::move(cell));
        t.points.push_back(std::move(point));
        t.symbolic_points.push_back(std::move(sym));
        keys_active.push_back(std::move(on));
    }
    return t;
}

std::optional<SigmaSolution> solve_sigma(const PointTable& t, const std::vector<Rational>& m)
{
    if (m.size() != t.dimension)
        throw DimensionMismatch("assessment has " + std::to_string(m.size()) + " values for a "
                                + std::to_string(t.dimension) + "-dimensional point table");
    const std::size_t cells = t.points.size();
    if (cells == 0)
        return std::nullopt;

    LinearProgram lp(cells);
    for (std::size_t i = 0; i < t.dimension; ++i)
    {
        std::vector<Rational> row(cells);
        for (std::size_t h = 0; h < cells; ++h)
            row[h] = t.points[h][i];
        lp.add_constraint(std::move(row), Relation::Equal, m[i]);
    }
    lp.add_constraint(std::vector<Rational>(cells, Rational(1)), Relation::Equal, Rational(1));

    LpResult r = lp.solve();
    if (r.status != LpStatus::Optimal)
        return std::nullopt;

    // Exact re-check of the certificate.
    Rational total(0);
    for (const auto& l : r.values)
    {
        if (l < 0)
            throw std::logic_error("simplex returned a negative weight");
        total += l;
    }
    if (total != 1)
        throw std::logic_error("simplex weights do not sum to one");
    for (std::size_t i = 0; i < t.dimension; ++i)
    {
        Rational s(0);
        for (std::size_t h = 0; h < cells; ++h)
            s += r.values[h] * t.points[h][i];
        if (s != m[i])
            throw std::logic_error("simplex weights do not reproduce the assessment");
    }
    return SigmaSolution{std::move(r.values)};
}

namespace {

void check_cap(const Assessment& a, const CoherenceOptions& options)
{
    if (a.size() == 0)
        throw PreconditionFailed("empty assessment");
    if (a.size() > options.family_cap)
        throw CapExceeded("family of " + std::to_string(a.size()) + " exceeds cap "
                          + std::to_string(options.family_cap));
}

}  // namespace

CoherenceVerdict check_coherence(const Assessment& a, const CoherenceOptions& options)
{
    check_cap(a, options);
    if (auto missing = a.missing_symbols(); !missing.empty())
        throw MissingSymbol("no value for prevision symbol '" + missing.begin()->name() + "'");

    CoherenceVerdict verdict;
    const auto subsets = subsets_by_size(a.size());
    for (const auto& subset : subsets)
    {
        std::optional<PointTable> t;
        try
        {
            t = build_points(a, subset);
        }
        catch (const EmptySupport&)
        {
            continue;
        }
        auto sol = solve_sigma(*t, assessed_values(a, subset));
        if (!sol)
        {
            verdict.coherent = false;
            verdict.witness = subset;
            return verdict;
        }
        if (subset.size() == a.size())
            verdict.solution = std::move(sol);
    }
    verdict.coherent = true;
    return verdict;
}

std::optional<DutchBook> dutch_book_on(const Assessment& a, const std::vector<std::size_t>& subset)
{
    PointTable t;
    try
    {
        t = build_points(a, subset);
    }
    catch (const EmptySupport&)
    {
        return std::nullopt;
    }
    const auto m = assessed_values(a, subset);
    const std::size_t k = subset.size();

    // Variables: u_i = s_i + 1 in [0, 2], then eps >= 0.
    LinearProgram lp(k + 1);
    for (const auto& q : t.points)
    {
        std::vector<Rational> row(k + 1);
        Rational rhs(0);
        for (std::size_t i = 0; i < k; ++i)
        {
            row[i] = q[i] - m[i];
            rhs += row[i];
        }
        row[k] = -1;
        lp.add_constraint(std::move(row), Relation::GreaterEqual, rhs);
    }
    for (std::size_t i = 0; i < k; ++i)
    {
        std::vector<Rational> row(k + 1);
        row[i] = 1;
        lp.add_constraint(std::move(row), Relation::LessEqual, Rational(2));
    }
    std::vector<Rational> objective(k + 1);
    objective[k] = 1;
    lp.set_objective(std::move(objective));

    LpResult r = lp.solve();
    if (r.status != LpStatus::Optimal)
        throw std::logic_error("Dutch-book program is always feasible and bounded");
    if (r.objective <= 0)
        return std::nullopt;

    DutchBook book;
    book.subset = subset;
    book.guaranteed_gain = r.objective;
    for (std::size_t i = 0; i < k; ++i)
        book.stakes.push_back(r.values[i] - 1);

    for (const auto& q : t.points)
    {
        Rational gain(0);
        for (std::size_t i = 0; i < k; ++i)
            gain += book.stakes[i] * (q[i] - m[i]);
        if (gain < book.guaranteed_gain)
            throw std::logic_error("Dutch-book stakes fail the exact gain check");
    }
    return book;
}

std::optional<DutchBook> find_dutch_book(const Assessment& a, const CoherenceOptions& options)
{
    check_cap(a, options);
    if (auto missing = a.missing_symbols(); !missing.empty())
        throw MissingSymbol("no value for prevision symbol '" + missing.begin()->name() + "'");
    for (const auto& subset : subsets_by_size(a.size()))
    {
        if (auto book = dutch_book_on(a, subset))
            return book;
    }
    return std::nullopt;
}

}  // namespace cohere
