#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "cohere/crq.hpp"
#include "cohere/rational.hpp"

namespace cohere {

struct AssessedItem
{
    Crq quantity;
    Rational value;
};

/**
 * A prevision assessment on a finite family of c.r.q.s over one registry.
 *
 * The valuation maps every item's own symbol to its assessed value, adds any
 * explicit parameters (symbols that parameterize payoffs without being
 * assessed themselves, e.g. P(B|K) inside a conjunction), and then solves
 * the links of negations and sums (own symbol = 1 - p, own = p1 + p2) for
 * whichever symbol is still unknown. Symbols left unassigned are reported
 * lazily, as MissingSymbol, by the engine.
 */
class Assessment
{
    public:
        /// Throws InvalidAssessment if one symbol receives two different values.
        Assessment(RegistryPtr registry, std::vector<AssessedItem> items, Valuation parameters = {});

        const RegistryPtr& registry() const { return registry_; }
        const std::vector<AssessedItem>& items() const { return items_; }
        std::size_t size() const { return items_.size(); }
        const Valuation& valuation() const { return valuation_; }
        const Valuation& parameters() const { return parameters_; }

        /// Symbols used by payoffs or support rules but absent from the valuation.
        std::set<Symbol> missing_symbols() const;
        bool depends_on(const Symbol& s) const;

        Assessment extended(const Crq& q, const Rational& value) const;

    private:
        RegistryPtr registry_;
        std::vector<AssessedItem> items_;
        Valuation parameters_;
        Valuation valuation_;
};

/**
 * The points Q_h of the system associated with a subfamily. Each entry of
 * `constituents` is one constituent of the partition generated by the
 * subfamily inside the disjunction of its supports: a class of atom-level
 * worlds on which every member is equally active and has the same symbolic
 * payoff. The all-off class is excluded (the assessment itself plays its
 * role).
 */
struct PointTable
{
    std::vector<std::size_t> subset;
    std::vector<TruthTable> constituents;
    std::vector<std::vector<Rational>> points;
    /// Same shape as points; the payoff polynomial if active, else the own symbol.
    std::vector<std::vector<Polynomial>> symbolic_points;
    std::size_t dimension = 0;
};

struct SigmaSolution
{
    std::vector<Rational> lambdas;
};

struct DutchBook
{
    std::vector<std::size_t> subset;
    std::vector<Rational> stakes;  // one per subset member, |s| <= 1
    Rational guaranteed_gain;      // epsilon > 0
};

struct CoherenceOptions
{
    std::size_t family_cap = 12;
};

struct CoherenceVerdict
{
    bool coherent = false;
    /// Smallest failing subset (size first, then lexicographic); empty when coherent.
    std::vector<std::size_t> witness;
    /// Convex-combination certificate for the whole family, when coherent and some bet is active.
    std::optional<SigmaSolution> solution;
};

/// Nonempty subsets of {0..n-1}, by size and then lexicographically.
std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t n);

/// Throws EmptySupport, MissingSymbol, PreconditionFailed (bad subset).
PointTable build_points(const Assessment& a, const std::vector<std::size_t>& subset);

/// Exact convex-hull membership of m in the table's points. Throws DimensionMismatch.
std::optional<SigmaSolution> solve_sigma(const PointTable& t, const std::vector<Rational>& m);

/// Assessed values of the subset members, in subset order.
std::vector<Rational> assessed_values(const Assessment& a, const std::vector<std::size_t>& subset);

/**
 * Coherence by solvability of the system for every nonempty subfamily.
 * A subfamily whose bets are all called off imposes no condition.
 * Throws CapExceeded, MissingSymbol.
 */
CoherenceVerdict check_coherence(const Assessment& a, const CoherenceOptions& options = {});

/// Best Dutch book on one subfamily: maximizes the guaranteed gain with |s_i| <= 1.
std::optional<DutchBook> dutch_book_on(const Assessment& a, const std::vector<std::size_t>& subset);

/// First subfamily (same order as check_coherence) admitting a sure gain. Throws CapExceeded.
std::optional<DutchBook> find_dutch_book(const Assessment& a, const CoherenceOptions& options = {});

}  // namespace cohere
