#pragma once

#include <cstddef>
#include <vector>

#include "cohere/rational.hpp"

namespace cohere {

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult
{
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> values;  // primal solution, one entry per variable
    Rational objective;
};

/**
 * maximize c.x subject to rows a.x (<=, =, >=) b and x >= 0, solved exactly
 * with a dense two-phase tableau simplex. Bland's rule is used for both
 * entering and leaving variables, so degenerate problems cannot cycle.
 *
 * Sized for coherence checks (tens of rows and columns), not for large LPs.
 */
class LinearProgram
{
    public:
        explicit LinearProgram(std::size_t variables);

        /// Throws DimensionMismatch if the row width differs from the variable count.
        void add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs);
        /// Default objective is zero, which turns solve() into a feasibility test.
        void set_objective(std::vector<Rational> coefficients);

        std::size_t variables() const { return variables_; }
        std::size_t constraints() const { return rows_.size(); }

        LpResult solve() const;

    private:
        struct Row
        {
            std::vector<Rational> coefficients;
            Relation relation;
            Rational rhs;
        };

        std::size_t variables_;
        std::vector<Row> rows_;
        std::vector<Rational> objective_;
};

}  // namespace cohere
