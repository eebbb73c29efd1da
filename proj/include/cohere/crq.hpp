#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cohere/event.hpp"
#include "cohere/polynomial.hpp"

namespace cohere {

/**
 * Conditional random quantities (c.r.q.s) as payoff tables.
 *
 * A c.r.q. assigns to every constituent of its registry a polynomial in
 * prevision symbols: the amount received when that world obtains. Its own
 * prevision is a symbol (the price paid). The support rule says at which
 * constituents the bet is active rather than called off; it may depend on
 * the numeric valuation of the symbols.
 */
enum class Provenance
{
    Plain,             // X|H for a random quantity X
    ConditionalEvent,  // A|H
    Conjunction,       // (A|H) & (B|K)
    Iterated,          // (B|K)|(A|H)
    IteratedSimple,    // C|(A|H)
    Negation,          // 1 - q
    Sum,               // q1 + q2
    Nested,            // (X|H)|K
};

std::string to_string(Provenance p);

/// A c.r.q. that behaves as the conditional event consequent|condition with the given prevision.
struct ConditionalView
{
    Event consequent;
    Event condition;
    Polynomial prevision;
};

struct SupportRule;

/// Active exactly on a fixed set of constituents.
struct FixedSupport
{
    TruthTable active;
};

/// Active on `always`, plus on `gated` when the gate polynomial evaluates > 0.
struct GatedSupport
{
    TruthTable always;
    TruthTable gated;
    Polynomial gate;
};

/// Off exactly where the substituted payoff equals the substituted prevision.
struct CoincidenceSupport
{
    std::shared_ptr<const std::vector<Polynomial>> payoffs;
    Polynomial prevision;
};

struct UnionSupport
{
    std::vector<SupportRule> parts;
};

struct SupportRule
{
    std::variant<FixedSupport, GatedSupport, CoincidenceSupport, UnionSupport> rule;
};

class Crq
{
    public:
        const RegistryPtr& registry() const { return data_->registry; }
        Provenance provenance() const { return data_->provenance; }
        const std::string& label() const { return data_->label; }

        const Symbol& own_symbol() const { return data_->own_symbol; }
        /**
         * What the own symbol stands for. Equal to the own symbol itself except
         * for negations and sums, where it is 1 - p and p1 + p2 in terms of the
         * parts' previsions. Assessments enforce own_symbol == prevision().
         */
        const Polynomial& prevision() const { return data_->prevision; }
        bool is_linked() const { return data_->prevision != Polynomial::variable(data_->own_symbol); }

        /// Indexed by constituent position.
        const std::vector<Polynomial>& payoffs() const { return *data_->payoffs; }
        const Polynomial& payoff(const Constituent& c) const { return data_->payoffs->at(c.position()); }

        const SupportRule& support_rule() const { return data_->support; }
        const std::optional<ConditionalView>& conditional_view() const { return data_->view; }
        /// Conditioning event of Plain, ConditionalEvent and Nested quantities.
        const std::optional<Event>& conditioning_event() const { return data_->condition; }
        /// Consequent event C of C|(A|H).
        const std::optional<Event>& consequent_event() const { return data_->consequent; }
        /// Operands, in construction order (inner before outer for iterated forms).
        const std::vector<Crq>& components() const { return data_->components; }

        /// Range of values the payoff can take when every symbol lies in its own range.
        const Rational& range_low() const { return data_->range_low; }
        const Rational& range_high() const { return data_->range_high; }

        /// Degenerate-input notes (e.g. A&H impossible for an iterated antecedent).
        const std::vector<std::string>& notes() const { return data_->notes; }

        Crq with_label(std::string label) const;

        /// For constructors in crq.cpp.
        struct Data
        {
            RegistryPtr registry;
            Provenance provenance;
            std::string label;
            Symbol own_symbol;
            Polynomial prevision;
            std::shared_ptr<const std::vector<Polynomial>> payoffs;
            SupportRule support;
            std::optional<ConditionalView> view;
            std::optional<Event> condition;
            std::optional<Event> consequent;
            std::vector<Crq> components;
            Rational range_low;
            Rational range_high;
            std::vector<std::string> notes;
        };

        explicit Crq(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    private:
        std::shared_ptr<const Data> data_;
};

/// A|H: 1 on AH, 0 on !A H, x on !H. Throws ImpossibleConditioningEvent.
Crq conditional_event(const RegistryPtr& registry, const Event& a, const Event& h, const Symbol& x);

/// X|H for a random quantity given by its value at each constituent position.
Crq plain(const RegistryPtr& registry, std::vector<Rational> values, const Event& h, const Symbol& mu);

/// The degenerate quantity equal to c everywhere; never active.
Crq constant(const RegistryPtr& registry, const Rational& c);

/// 1 - q with a fresh own symbol linked to 1 - prevision(q). Default name: own symbol + "'".
Crq negate(const Crq& q, std::optional<Symbol> fresh = std::nullopt);

/**
 * (A|H) & (B|K) = 1*AHBK + x*!HBK + y*AH!K + z*!H!K, active on H|K.
 * Both operands must have a conditional-event view.
 */
Crq conjunction(const Crq& first, const Crq& second, const Symbol& z);

/**
 * (B|K)|(A|H) = (B|K)&(A|H) + mu*(!A|H) with own symbol mu; `z` names the
 * prevision of the conjunction. Active on AH, on !H while x > 0, and wherever
 * the payoff differs from mu.
 */
Crq iterated(const Crq& inner, const Crq& outer, const Symbol& mu, const Symbol& z);

/// C|(A|H), the K = TOP case of `iterated`. Active on AH | !H(x > 0).
Crq iterated_simple(const Crq& inner, const Event& c, const Symbol& y);

/// Pointwise sum; active on the union of the operands' supports.
Crq sum(const Crq& a, const Crq& b, std::optional<Symbol> fresh = std::nullopt);

/// (X|H)|K with own symbol nu: payoff of X|H on K, nu on !K.
Crq condition_on(const Crq& q, const Event& k, const Symbol& nu);

/**
 * (X|H)|K -> X|H when H implies K. The valuation is completed with nu = mu
 * if nu is unassigned; the two payoff tables must then agree pointwise.
 * Throws PreconditionFailed.
 */
Crq reduce_nested(const Crq& nested, const Valuation& valuation);

/// Constituents where the bet is active. Throws MissingSymbol.
TruthTable support(const Crq& q, const Valuation& valuation);
std::vector<Constituent> support_constituents(const Crq& q, const Valuation& valuation);

TruthTable evaluate_support(const SupportRule& rule, const Valuation& valuation, std::size_t worlds);

/// Throws MissingSymbol.
Rational payoff_at(const Crq& q, const Constituent& c, const Valuation& valuation);

}  // namespace cohere
