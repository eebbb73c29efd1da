#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cohere/coherence.hpp"

namespace cohere {

/**
 * Assessment documents: a line-oriented text format.
 *
 *     # comment
 *     atoms A C H
 *     define AH = A & H
 *     assess P(A given H) = 1/2
 *     assess P(C given (A given H)) = 0.5
 *     param P(B given K) = 1/3
 *     query extend C
 *
 * Event expressions use `!`, `&`, `|`, TOP, BOT and parentheses (`!` binds
 * tightest, then `&`, then `|`). A conditional expression is `E given F`,
 * where either side may itself be a parenthesized conditional. `&` and `!`
 * also apply to conditionals (conjunction, negation).
 *
 * `param` lines fix the value of a prevision symbol that appears in payoffs
 * without adding the quantity to the assessed family.
 */
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr
{
    enum class Kind { Top, Bottom, Name, Not, And, Or, Given };

    Kind kind;
    std::string name;
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr top();
    static ExprPtr bottom();
    static ExprPtr named(std::string name);
    static ExprPtr negation(ExprPtr operand);
    static ExprPtr conjunction(ExprPtr a, ExprPtr b);
    static ExprPtr disjunction(ExprPtr a, ExprPtr b);
    static ExprPtr given(ExprPtr consequent, ExprPtr condition);
};

bool equal(const Expr& a, const Expr& b);
/// Minimal-parenthesis rendering that reparses to the same tree.
std::string to_string(const Expr& e);

enum class QueryKind { Check, Extend, Mp, DutchBook, Table };

std::string to_string(QueryKind k);
std::optional<QueryKind> parse_query_kind(std::string_view word);

struct Definition
{
    std::string name;
    ExprPtr expr;
};

struct Statement
{
    ExprPtr target;
    Rational value;
};

struct Query
{
    QueryKind kind;
    ExprPtr target;  // may be null
};

struct AssessmentDocument
{
    std::vector<std::string> atoms;
    std::vector<Definition> definitions;
    std::vector<Statement> statements;
    std::vector<Statement> parameters;
    std::optional<Query> query;
};

bool operator==(const AssessmentDocument& a, const AssessmentDocument& b);

/// Throws ParseError (with line and column) or UndeclaredAtom.
AssessmentDocument parse_document(std::string_view text);

/**
 * Parses a standalone conditional expression, e.g. a --target argument.
 * Identifiers are not checked here; Model::quantity reports unknown ones.
 */
ExprPtr parse_expression(std::string_view text);

std::string serialize(const AssessmentDocument& doc);

/**
 * Semantic view of a document: the atom registry, resolved definitions and
 * the c.r.q. for every conditional expression. Quantities are identified by
 * logical content, so `A given H` and `A & H given H` share one prevision
 * symbol, and `!A given H` is built as the negation of `A given H` when
 * both occur. Symbols are named p1, p2, ... in order of first use.
 */
class Model
{
    public:
        /// Throws UndeclaredAtom, CapExceeded, PreconditionFailed.
        explicit Model(const AssessmentDocument& doc);

        const RegistryPtr& registry() const { return registry_; }

        /// Throws PreconditionFailed if the expression is conditional.
        Event event(const ExprPtr& e) const;
        /// Throws ImpossibleConditioningEvent, UndeclaredAtom, PreconditionFailed.
        Crq quantity(const ExprPtr& e);

        /// Items from `assess` lines, parameters from `param` lines.
        Assessment assessment();

        struct SymbolInfo
        {
            Symbol symbol;
            std::string description;
        };
        /// Every symbol created so far, in creation order.
        const std::vector<SymbolInfo>& legend() const { return legend_; }

    private:
        Crq conditional(const Event& a, const Event& h, const std::string& text);
        Crq conjunction_of(const Crq& first, const Crq& second, const std::string& text);
        std::string key_of(const Crq& q) const;
        std::string ce_key(const Event& a, const Event& h) const;
        Symbol fresh(const std::string& description);
        Crq remember(const std::string& key, Crq q);

        const AssessmentDocument* doc_;
        RegistryPtr registry_;
        std::map<std::string, Event> definitions_;
        std::map<std::string, Crq> cache_;
        std::vector<SymbolInfo> legend_;
};

}  // namespace cohere
