#include "cohere/event.hpp"

#include <stdexcept>

#include "cohere/errors.hpp"

namespace cohere {

AtomRegistry::AtomRegistry(const std::vector<std::string>& names)
{
    for (const auto& n : names)
        add(n);
}

std::size_t AtomRegistry::add(const std::string& name)
{
    if (find(name))
        throw std::invalid_argument("duplicate atom '" + name + "'");
    atoms_.push_back(Atom{name, atoms_.size()});
    return atoms_.back().index;
}

std::optional<std::size_t> AtomRegistry::find(std::string_view name) const
{
    for (const auto& a : atoms_)
    {
        if (a.name == name)
            return a.index;
    }
    return std::nullopt;
}

std::size_t AtomRegistry::index_of(std::string_view name) const
{
    if (auto i = find(name))
        return *i;
    throw UnknownAtom("unknown atom '" + std::string(name) + "'");
}

RegistryPtr make_registry(const std::vector<std::string>& names)
{
    return std::make_shared<const AtomRegistry>(names);
}

Event Event::top()
{
    return Event(std::make_shared<const Node>(Node{Kind::True, {}, nullptr, nullptr}));
}

Event Event::bottom()
{
    return Event(std::make_shared<const Node>(Node{Kind::False, {}, nullptr, nullptr}));
}

Event Event::atom(std::string name)
{
    return Event(std::make_shared<const Node>(Node{Kind::AtomRef, std::move(name), nullptr, nullptr}));
}

Event operator!(const Event& e)
{
    return Event(std::make_shared<const Event::Node>(
        Event::Node{Event::Kind::Not, {}, std::make_shared<const Event>(e), nullptr}));
}

Event operator&(const Event& a, const Event& b)
{
    return Event(std::make_shared<const Event::Node>(Event::Node{
        Event::Kind::And, {}, std::make_shared<const Event>(a), std::make_shared<const Event>(b)}));
}

Event operator|(const Event& a, const Event& b)
{
    return Event(std::make_shared<const Event::Node>(Event::Node{
        Event::Kind::Or, {}, std::make_shared<const Event>(a), std::make_shared<const Event>(b)}));
}

namespace {

// Binding strength: Or < And < Not/primary.
int precedence(Event::Kind k)
{
    switch (k)
    {
        case Event::Kind::Or: return 1;
        case Event::Kind::And: return 2;
        default: return 3;
    }
}

std::string render(const Event& e, int context)
{
    std::string out;
    switch (e.kind())
    {
        case Event::Kind::True: return "TOP";
        case Event::Kind::False: return "BOT";
        case Event::Kind::AtomRef: return e.name();
        case Event::Kind::Not: return "!" + render(e.lhs(), 3);
        case Event::Kind::And:
            out = render(e.lhs(), 2) + " & " + render(e.rhs(), 3);
            break;
        case Event::Kind::Or:
            out = render(e.lhs(), 1) + " | " + render(e.rhs(), 2);
            break;
    }
    return precedence(e.kind()) < context ? "(" + out + ")" : out;
}

}  // namespace

std::string Event::to_string() const
{
    return render(*this, 0);
}

Constituent::Constituent(RegistryPtr registry, std::size_t position)
    : registry_(std::move(registry)), position_(position)
{
    if (!registry_)
        throw std::invalid_argument("constituent without registry");
}

bool Constituent::truth(std::size_t atom_index) const
{
    const std::size_t n = registry_->size();
    return (position_ >> (n - 1 - atom_index)) & 1u;
}

std::vector<bool> Constituent::assignment() const
{
    std::vector<bool> bits(size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        bits[i] = truth(i);
    return bits;
}

std::string Constituent::to_string() const
{
    std::string out;
    for (const auto& a : registry_->atoms())
    {
        if (!out.empty())
            out += " & ";
        out += (truth(a.index) ? "" : "!") + a.name;
    }
    return out.empty() ? "TOP" : out;
}

std::size_t constituent_count(const AtomRegistry& registry, std::size_t cap)
{
    if (registry.size() > cap)
        throw CapExceeded("atom count " + std::to_string(registry.size()) + " exceeds cap "
                          + std::to_string(cap));
    return std::size_t{1} << registry.size();
}

std::vector<Constituent> enumerate_constituents(const RegistryPtr& registry, std::size_t cap)
{
    const std::size_t m = constituent_count(*registry, cap);
    std::vector<Constituent> out;
    out.reserve(m);
    for (std::size_t k = 0; k < m; ++k)
        out.emplace_back(registry, k);
    return out;
}

bool evaluate(const Event& e, const Constituent& c)
{
    switch (e.kind())
    {
        case Event::Kind::True: return true;
        case Event::Kind::False: return false;
        case Event::Kind::AtomRef: return c.truth(c.registry()->index_of(e.name()));
        case Event::Kind::Not: return !evaluate(e.lhs(), c);
        case Event::Kind::And: return evaluate(e.lhs(), c) && evaluate(e.rhs(), c);
        case Event::Kind::Or: return evaluate(e.lhs(), c) || evaluate(e.rhs(), c);
    }
    return false;
}

TruthTable truth_table(const AtomRegistry& registry, const Event& e)
{
    const std::size_t m = constituent_count(registry);
    switch (e.kind())
    {
        case Event::Kind::True:
        {
            TruthTable t(m);
            return t.set();
        }
        case Event::Kind::False: return TruthTable(m);
        case Event::Kind::AtomRef:
        {
            const std::size_t shift = registry.size() - 1 - registry.index_of(e.name());
            TruthTable t(m);
            for (std::size_t k = 0; k < m; ++k)
                t[k] = (k >> shift) & 1u;
            return t;
        }
        case Event::Kind::Not: return ~truth_table(registry, e.lhs());
        case Event::Kind::And: return truth_table(registry, e.lhs()) & truth_table(registry, e.rhs());
        case Event::Kind::Or: return truth_table(registry, e.lhs()) | truth_table(registry, e.rhs());
    }
    return TruthTable(m);
}

bool implies(const AtomRegistry& registry, const Event& a, const Event& b)
{
    return truth_table(registry, a).is_subset_of(truth_table(registry, b));
}

bool is_impossible(const AtomRegistry& registry, const Event& e)
{
    return truth_table(registry, e).none();
}

bool equivalent(const AtomRegistry& registry, const Event& a, const Event& b)
{
    return truth_table(registry, a) == truth_table(registry, b);
}

std::string describe_constituents(const AtomRegistry& registry, const TruthTable& worlds)
{
    const std::size_t n = registry.size();
    if (worlds.none())
        return "BOT";
    if (worlds.all())
        return "TOP";

    // A cube fixes the atoms in `fixed` to the values in `value` (bit i = atom i).
    auto bit_of = [n](std::size_t position, std::size_t atom) { return (position >> (n - 1 - atom)) & 1u; };
    auto covers = [&](std::uint64_t fixed, std::uint64_t value, std::size_t position) {
        for (std::size_t i = 0; i < n; ++i)
        {
            if (((fixed >> i) & 1u) && bit_of(position, i) != ((value >> i) & 1u))
                return false;
        }
        return true;
    };
    auto inside = [&](std::uint64_t fixed, std::uint64_t value) {
        for (std::size_t k = 0; k < worlds.size(); ++k)
        {
            if (covers(fixed, value, k) && !worlds[k])
                return false;
        }
        return true;
    };

    TruthTable remaining = worlds;
    std::string out;
    while (remaining.any())
    {
        // Start from the highest remaining position so "all true" worlds lead.
        std::size_t seed = 0;
        for (std::size_t k = remaining.size(); k-- > 0;)
        {
            if (remaining[k])
            {
                seed = k;
                break;
            }
        }
        std::uint64_t fixed = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
        std::uint64_t value = 0;
        for (std::size_t i = 0; i < n; ++i)
            value |= std::uint64_t{bit_of(seed, i)} << i;
        for (std::size_t i = 0; i < n; ++i)
        {
            std::uint64_t trial = fixed & ~(std::uint64_t{1} << i);
            if (inside(trial, value))
                fixed = trial;
        }
        std::string cube;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!((fixed >> i) & 1u))
                continue;
            if (!cube.empty())
                cube += " & ";
            cube += (((value >> i) & 1u) ? "" : "!") + registry.atoms()[i].name;
        }
        for (std::size_t k = 0; k < remaining.size(); ++k)
        {
            if (covers(fixed, value, k))
                remaining[k] = false;
        }
        if (!out.empty())
            out += " | ";
        out += cube;
    }
    return out;
}

}  // namespace cohere
