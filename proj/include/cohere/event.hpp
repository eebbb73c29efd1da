#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace cohere {

struct Atom
{
    std::string name;
    std::size_t index;
};

/**
 * Ordered set of uniquely named atoms. Indices are contiguous from 0 in
 * insertion order. Registries are shared between events, constituents and
 * conditional quantities as `RegistryPtr` once populated.
 */
class AtomRegistry
{
    public:
        AtomRegistry() = default;
        explicit AtomRegistry(const std::vector<std::string>& names);

        /// Throws std::invalid_argument on a duplicate name.
        std::size_t add(const std::string& name);

        std::optional<std::size_t> find(std::string_view name) const;
        /// Throws UnknownAtom.
        std::size_t index_of(std::string_view name) const;

        const std::vector<Atom>& atoms() const { return atoms_; }
        std::size_t size() const { return atoms_.size(); }

    private:
        std::vector<Atom> atoms_;
};

using RegistryPtr = std::shared_ptr<const AtomRegistry>;

RegistryPtr make_registry(const std::vector<std::string>& names);

/// Truth value of an event at every constituent, indexed by constituent position.
using TruthTable = boost::dynamic_bitset<>;

/**
 * Boolean formula over named atoms. Immutable; copies share structure.
 */
class Event
{
    public:
        enum class Kind { True, False, AtomRef, Not, And, Or };

        static Event top();
        static Event bottom();
        static Event atom(std::string name);

        Kind kind() const { return node_->kind; }
        /// Atom name; empty unless kind() == AtomRef.
        const std::string& name() const { return node_->name; }
        const Event& lhs() const { return *node_->lhs; }
        const Event& rhs() const { return *node_->rhs; }

        friend Event operator!(const Event& e);
        friend Event operator&(const Event& a, const Event& b);
        friend Event operator|(const Event& a, const Event& b);

        /// Renders in the assessment-file grammar (`!`, `&`, `|`, TOP, BOT).
        std::string to_string() const;

    private:
        struct Node
        {
            Kind kind;
            std::string name;
            std::shared_ptr<const Event> lhs;
            std::shared_ptr<const Event> rhs;
        };

        explicit Event(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

        std::shared_ptr<const Node> node_;
};

/**
 * One possible world. Constituents are numbered in lexicographic order of
 * the assignment string (atom 0 first, false < true), so position 0 makes
 * every atom false.
 */
class Constituent
{
    public:
        Constituent(RegistryPtr registry, std::size_t position);

        std::size_t position() const { return position_; }
        std::size_t size() const { return registry_->size(); }
        const RegistryPtr& registry() const { return registry_; }

        bool truth(std::size_t atom_index) const;
        /// Bit i is the truth value of atom i.
        std::vector<bool> assignment() const;

        /// e.g. "A & !C & H"
        std::string to_string() const;

        friend bool operator==(const Constituent& a, const Constituent& b)
        {
            return a.position_ == b.position_ && a.registry_ == b.registry_;
        }

    private:
        RegistryPtr registry_;
        std::size_t position_;
};

inline constexpr std::size_t default_atom_cap = 20;

/// All 2^n constituents in lexicographic order. Throws CapExceeded.
std::vector<Constituent> enumerate_constituents(const RegistryPtr& registry,
                                                std::size_t cap = default_atom_cap);

/// Number of constituents, 2^n. Throws CapExceeded.
std::size_t constituent_count(const AtomRegistry& registry, std::size_t cap = default_atom_cap);

/// Throws UnknownAtom.
bool evaluate(const Event& e, const Constituent& c);

/// Throws UnknownAtom, CapExceeded.
TruthTable truth_table(const AtomRegistry& registry, const Event& e);

bool implies(const AtomRegistry& registry, const Event& a, const Event& b);
bool is_impossible(const AtomRegistry& registry, const Event& e);
/// Semantic equality: identical truth tables.
bool equivalent(const AtomRegistry& registry, const Event& a, const Event& b);

/**
 * Compact description of a set of constituents as a disjunction of literal
 * conjunctions ("cubes"), e.g. "!A & H | !H & C". Used for table labels.
 */
std::string describe_constituents(const AtomRegistry& registry, const TruthTable& worlds);

}  // namespace cohere
