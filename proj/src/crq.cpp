#include "cohere/crq.hpp"

#include <algorithm>

#include "cohere/errors.hpp"

namespace cohere {

std::string to_string(Provenance p)
{
    switch (p)
    {
        case Provenance::Plain: return "plain";
        case Provenance::ConditionalEvent: return "conditional-event";
        case Provenance::Conjunction: return "conjunction";
        case Provenance::Iterated: return "iterated";
        case Provenance::IteratedSimple: return "iterated-simple";
        case Provenance::Negation: return "negation";
        case Provenance::Sum: return "sum";
        case Provenance::Nested: return "nested";
    }
    return "unknown";
}

Crq Crq::with_label(std::string label) const
{
    auto copy = std::make_shared<Data>(*data_);
    copy->label = std::move(label);
    return Crq(std::move(copy));
}

namespace {

using Payoffs = std::vector<Polynomial>;

std::string wrap_event(const Event& e)
{
    auto k = e.kind();
    if (k == Event::Kind::AtomRef || k == Event::Kind::True || k == Event::Kind::False || k == Event::Kind::Not)
        return e.to_string();
    return "(" + e.to_string() + ")";
}

std::string wrap_label(const Crq& q)
{
    const auto& l = q.label();
    if (q.provenance() == Provenance::ConditionalEvent && q.conditioning_event()
        && q.conditioning_event()->kind() == Event::Kind::True)
        return l;
    return "(" + l + ")";
}

const ConditionalView& require_view(const Crq& q, const char* role)
{
    if (!q.conditional_view())
        throw PreconditionFailed(std::string(role) + " '" + q.label() + "' is not a conditional event");
    return *q.conditional_view();
}

Polynomial one_minus(const Polynomial& p)
{
    return Polynomial(1) - p;
}

// Payoff of the conditional event A|H with prevision x, per constituent.
Payoffs conditional_payoffs(const TruthTable& a, const TruthTable& h, const Polynomial& x)
{
    Payoffs out(h.size());
    for (std::size_t k = 0; k < h.size(); ++k)
        out[k] = h[k] ? Polynomial(a[k] ? 1 : 0) : x;
    return out;
}

// 1*AHBK + x*!HBK + y*AH!K + z*!H!K
Payoffs conjunction_payoffs(const TruthTable& a, const TruthTable& h, const Polynomial& x,
                            const TruthTable& b, const TruthTable& k, const Polynomial& y,
                            const Polynomial& z)
{
    Payoffs out(h.size());
    for (std::size_t w = 0; w < h.size(); ++w)
    {
        if (h[w] && k[w])
            out[w] = Polynomial((a[w] && b[w]) ? 1 : 0);
        else if (!h[w] && k[w])
            out[w] = b[w] ? x : Polynomial(0);
        else if (h[w] && !k[w])
            out[w] = a[w] ? y : Polynomial(0);
        else
            out[w] = z;
    }
    return out;
}

}  // namespace

Crq conditional_event(const RegistryPtr& registry, const Event& a, const Event& h, const Symbol& x)
{
    const auto ht = truth_table(*registry, h);
    const auto at = truth_table(*registry, a);
    if (ht.none())
        throw ImpossibleConditioningEvent("conditioning event '" + h.to_string() + "' is impossible");

    auto d = std::make_shared<Crq::Data>();
    d->registry = registry;
    d->provenance = Provenance::ConditionalEvent;
    d->label = h.kind() == Event::Kind::True ? a.to_string() : wrap_event(a) + "|" + wrap_event(h);
    d->own_symbol = x;
    d->prevision = Polynomial::variable(x);
    d->payoffs = std::make_shared<const Payoffs>(conditional_payoffs(at, ht, d->prevision));
    d->support = SupportRule{FixedSupport{ht}};
    d->view = ConditionalView{a, h, d->prevision};
    d->condition = h;
    d->range_low = 0;
    d->range_high = 1;
    if ((at & ht).none())
        d->notes.push_back("consequent and conditioning event are incompatible");
    return Crq(std::move(d));
}

Crq plain(const RegistryPtr& registry, std::vector<Rational> values, const Event& h, const Symbol& mu)
{
    const auto ht = truth_table(*registry, h);
    if (values.size() != ht.size())
        throw DimensionMismatch("random quantity needs one value per constituent");
    if (ht.none())
        throw ImpossibleConditioningEvent("conditioning event '" + h.to_string() + "' is impossible");

    auto d = std::make_shared<Crq::Data>();
    d->registry = registry;
    d->provenance = Provenance::Plain;
    d->label = "X|" + wrap_event(h);
    d->own_symbol = mu;
    d->prevision = Polynomial::variable(mu);
    Payoffs out(ht.size());
    bool first = true;
    for (std::size_t k = 0; k < ht.size(); ++k)
    {
        if (!ht[k])
        {
            out[k] = d->prevision;
            continue;
        }
        out[k] = Polynomial(values[k]);
        if (first || values[k] < d->range_low)
            d->range_low = values[k];
        if (first || values[k] > d->range_high)
            d->range_high = values[k];
        first = false;
    }
    d->payoffs = std::make_shared<const Payoffs>(std::move(out));
    d->support = SupportRule{FixedSupport{ht}};
    d->condition = h;
    return Crq(std::move(d));
}

Crq constant(const RegistryPtr& registry, const Rational& c)
{
    const std::size_t m = constituent_count(*registry);
    auto d = std::make_shared<Crq::Data>();
    d->registry = registry;
    d->provenance = Provenance::Plain;
    d->label = to_string(c);
    d->own_symbol = Symbol("const(" + to_string(c) + ")");
    d->prevision = Polynomial(c);
    d->payoffs = std::make_shared<const Payoffs>(m, Polynomial(c));
    d->support = SupportRule{FixedSupport{TruthTable(m)}};
    d->condition = Event::top();
    d->range_low = c;
    d->range_high = c;
    return Crq(std::move(d));
}

Crq negate(const Crq& q, std::optional<Symbol> fresh)
{
    auto d = std::make_shared<Crq::Data>();
    d->registry = q.registry();
    d->provenance = Provenance::Negation;
    d->label = "!" + wrap_label(q);
    d->own_symbol = fresh ? *fresh : Symbol(q.own_symbol().name() + "'");
    d->prevision = one_minus(q.prevision());
    Payoffs out;
    out.reserve(q.payoffs().size());
    for (const auto& p : q.payoffs())
        out.push_back(one_minus(p));
    d->payoffs = std::make_shared<const Payoffs>(std::move(out));
    d->support = q.support_rule();
    if (const auto& v = q.conditional_view())
        d->view = ConditionalView{!v->consequent, v->condition, one_minus(v->prevision)};
    d->condition = q.conditioning_event();
    d->components = {q};
    d->range_low = 1 - q.range_high();
    d->range_high = 1 - q.range_low();
    d->notes = q.notes();
    return Crq(std::move(d));
}

Crq conjunction(const Crq& first, const Crq& second, const Symbol& z)
{
    if (first.registry() != second.registry())
        throw PreconditionFailed("conjunction operands use different registries");
    const auto& v1 = require_view(first, "conjunct");
    const auto& v2 = require_view(second, "conjunct");
    const auto& reg = *first.registry();
    const auto a = truth_table(reg, v1.consequent);
    const auto h = truth_table(reg, v1.condition);
    const auto b = truth_table(reg, v2.consequent);
    const auto k = truth_table(reg, v2.condition);
    if (h.none() || k.none())
        throw ImpossibleConditioningEvent("conjunction of conditionals with an impossible conditioning event");

    auto d = std::make_shared<Crq::Data>();
    d->registry = first.registry();
    d->provenance = Provenance::Conjunction;
    d->label = wrap_label(first) + " & " + wrap_label(second);
    d->own_symbol = z;
    d->prevision = Polynomial::variable(z);
    d->payoffs = std::make_shared<const Payoffs>(
        conjunction_payoffs(a, h, v1.prevision, b, k, v2.prevision, d->prevision));
    d->support = SupportRule{FixedSupport{h | k}};
    d->components = {first, second};
    d->range_low = 0;
    d->range_high = 1;
    return Crq(std::move(d));
}

namespace {

// conjunction(inner, outer) + mu * (1 - inner), the definition of the iterated conditional.
Payoffs iterated_payoffs(const AtomRegistry& reg, const ConditionalView& inner, const ConditionalView& outer,
                         const Polynomial& mu, const Polynomial& z)
{
    const auto a = truth_table(reg, inner.consequent);
    const auto h = truth_table(reg, inner.condition);
    const auto b = truth_table(reg, outer.consequent);
    const auto k = truth_table(reg, outer.condition);
    Payoffs conj = conjunction_payoffs(a, h, inner.prevision, b, k, outer.prevision, z);
    Payoffs inner_pay = conditional_payoffs(a, h, inner.prevision);
    for (std::size_t w = 0; w < conj.size(); ++w)
        conj[w] += mu * one_minus(inner_pay[w]);
    return conj;
}

std::vector<std::string> antecedent_notes(const AtomRegistry& reg, const ConditionalView& inner)
{
    std::vector<std::string> notes;
    if (is_impossible(reg, inner.consequent))
        notes.push_back("antecedent consequent is impossible");
    else if (is_impossible(reg, inner.consequent & inner.condition))
        notes.push_back("antecedent conjunction A&H is impossible");
    return notes;
}

}  // namespace

Crq iterated(const Crq& inner, const Crq& outer, const Symbol& mu, const Symbol& z)
{
    if (inner.registry() != outer.registry())
        throw PreconditionFailed("iterated conditional operands use different registries");
    const auto& vi = require_view(inner, "antecedent");
    const auto& vo = require_view(outer, "consequent");
    const auto& reg = *inner.registry();
    if (is_impossible(reg, vi.condition) || is_impossible(reg, vo.condition))
        throw ImpossibleConditioningEvent("iterated conditional with an impossible conditioning event");

    auto d = std::make_shared<Crq::Data>();
    d->registry = inner.registry();
    d->provenance = Provenance::Iterated;
    d->label = wrap_label(outer) + "|" + wrap_label(inner);
    d->own_symbol = mu;
    d->prevision = Polynomial::variable(mu);
    auto payoffs = std::make_shared<const Payoffs>(
        iterated_payoffs(reg, vi, vo, d->prevision, Polynomial::variable(z)));
    d->payoffs = payoffs;
    // On over AH, and over !H while x > 0, as in the K = TOP case; elsewhere
    // only where the payoff differs from mu.
    const auto h = truth_table(reg, vi.condition);
    const auto a = truth_table(reg, vi.consequent);
    d->support = SupportRule{UnionSupport{{SupportRule{GatedSupport{a & h, ~h, vi.prevision}},
                                           SupportRule{CoincidenceSupport{payoffs, d->prevision}}}}};
    d->components = {inner, outer};
    d->range_low = 0;
    d->range_high = 1;
    d->notes = antecedent_notes(reg, vi);
    return Crq(std::move(d));
}

Crq iterated_simple(const Crq& inner, const Event& c, const Symbol& y)
{
    const auto& vi = require_view(inner, "antecedent");
    const auto& reg = *inner.registry();
    const auto h = truth_table(reg, vi.condition);
    if (h.none())
        throw ImpossibleConditioningEvent("iterated conditional with an impossible conditioning event");
    const auto a = truth_table(reg, vi.consequent);

    auto d = std::make_shared<Crq::Data>();
    d->registry = inner.registry();
    d->provenance = Provenance::IteratedSimple;
    d->label = wrap_event(c) + "|" + wrap_label(inner);
    d->own_symbol = y;
    d->prevision = Polynomial::variable(y);
    ConditionalView outer{c, Event::top(), Polynomial()};
    // With K = TOP the conjunction's !K rows are empty, so its prevision never appears.
    d->payoffs = std::make_shared<const Payoffs>(
        iterated_payoffs(reg, vi, outer, d->prevision, Polynomial()));
    d->support = SupportRule{GatedSupport{a & h, ~h, vi.prevision}};
    d->consequent = c;
    d->components = {inner};
    d->range_low = 0;
    d->range_high = 1;
    d->notes = antecedent_notes(reg, vi);
    return Crq(std::move(d));
}

Crq sum(const Crq& a, const Crq& b, std::optional<Symbol> fresh)
{
    if (a.registry() != b.registry())
        throw PreconditionFailed("sum operands use different registries");
    auto d = std::make_shared<Crq::Data>();
    d->registry = a.registry();
    d->provenance = Provenance::Sum;
    d->label = wrap_label(a) + " + " + wrap_label(b);
    d->own_symbol = fresh ? *fresh : Symbol("sum(" + a.own_symbol().name() + "," + b.own_symbol().name() + ")");
    d->prevision = a.prevision() + b.prevision();
    Payoffs out(a.payoffs().size());
    for (std::size_t w = 0; w < out.size(); ++w)
        out[w] = a.payoffs()[w] + b.payoffs()[w];
    d->payoffs = std::make_shared<const Payoffs>(std::move(out));
    d->support = SupportRule{UnionSupport{{a.support_rule(), b.support_rule()}}};
    d->components = {a, b};
    d->range_low = a.range_low() + b.range_low();
    d->range_high = a.range_high() + b.range_high();
    return Crq(std::move(d));
}

Crq condition_on(const Crq& q, const Event& k, const Symbol& nu)
{
    const auto kt = truth_table(*q.registry(), k);
    if (kt.none())
        throw ImpossibleConditioningEvent("conditioning event '" + k.to_string() + "' is impossible");
    auto d = std::make_shared<Crq::Data>();
    d->registry = q.registry();
    d->provenance = Provenance::Nested;
    d->label = wrap_label(q) + "|" + wrap_event(k);
    d->own_symbol = nu;
    d->prevision = Polynomial::variable(nu);
    Payoffs out(kt.size());
    for (std::size_t w = 0; w < out.size(); ++w)
        out[w] = kt[w] ? q.payoffs()[w] : d->prevision;
    auto payoffs = std::make_shared<const Payoffs>(std::move(out));
    d->payoffs = payoffs;
    d->support = SupportRule{CoincidenceSupport{payoffs, d->prevision}};
    d->condition = k;
    d->components = {q};
    d->range_low = q.range_low();
    d->range_high = q.range_high();
    return Crq(std::move(d));
}

Crq reduce_nested(const Crq& nested, const Valuation& valuation)
{
    if (nested.provenance() != Provenance::Nested || nested.components().size() != 1)
        throw PreconditionFailed("'" + nested.label() + "' is not of the form (X|H)|K");
    const Crq& inner = nested.components().front();
    const auto& reg = *nested.registry();
    if (!inner.conditioning_event())
        throw PreconditionFailed("inner quantity '" + inner.label() + "' has no conditioning event");
    if (!implies(reg, *inner.conditioning_event(), *nested.conditioning_event()))
        throw PreconditionFailed("'" + inner.conditioning_event()->to_string() + "' does not imply '"
                                 + nested.conditioning_event()->to_string() + "'");

    Valuation v = valuation;
    if (!v.count(nested.own_symbol()))
        v[nested.own_symbol()] = inner.prevision().evaluate(v);
    for (std::size_t w = 0; w < inner.payoffs().size(); ++w)
    {
        if (nested.payoffs()[w].evaluate(v) != inner.payoffs()[w].evaluate(v))
            throw PreconditionFailed("payoff tables of '" + nested.label() + "' and '" + inner.label()
                                     + "' differ under the valuation");
    }
    return inner;
}

TruthTable evaluate_support(const SupportRule& rule, const Valuation& valuation, std::size_t worlds)
{
    struct Visitor
    {
        const Valuation& valuation;
        std::size_t worlds;

        TruthTable operator()(const FixedSupport& s) const { return s.active; }
        TruthTable operator()(const GatedSupport& s) const
        {
            return s.gate.evaluate(valuation) > 0 ? (s.always | s.gated) : s.always;
        }
        TruthTable operator()(const CoincidenceSupport& s) const
        {
            const Rational own = s.prevision.evaluate(valuation);
            TruthTable out(worlds);
            for (std::size_t w = 0; w < worlds; ++w)
                out[w] = s.payoffs->at(w).evaluate(valuation) != own;
            return out;
        }
        TruthTable operator()(const UnionSupport& s) const
        {
            TruthTable out(worlds);
            for (const auto& part : s.parts)
                out |= evaluate_support(part, valuation, worlds);
            return out;
        }
    };
    return std::visit(Visitor{valuation, worlds}, rule.rule);
}

TruthTable support(const Crq& q, const Valuation& valuation)
{
    return evaluate_support(q.support_rule(), valuation, q.payoffs().size());
}

std::vector<Constituent> support_constituents(const Crq& q, const Valuation& valuation)
{
    const auto on = support(q, valuation);
    std::vector<Constituent> out;
    for (std::size_t w = 0; w < on.size(); ++w)
    {
        if (on[w])
            out.emplace_back(q.registry(), w);
    }
    return out;
}

Rational payoff_at(const Crq& q, const Constituent& c, const Valuation& valuation)
{
    return q.payoff(c).evaluate(valuation);
}

}  // namespace cohere
