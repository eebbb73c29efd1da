#include "cohere/simplex.hpp"

#include <optional>

#include "cohere/errors.hpp"

namespace cohere {

LinearProgram::LinearProgram(std::size_t variables)
    : variables_(variables), objective_(variables, Rational(0))
{
}

void LinearProgram::add_constraint(std::vector<Rational> coefficients, Relation relation, Rational rhs)
{
    if (coefficients.size() != variables_)
        throw DimensionMismatch("constraint has " + std::to_string(coefficients.size())
                                + " coefficients, expected " + std::to_string(variables_));
    rows_.push_back(Row{std::move(coefficients), relation, std::move(rhs)});
}

void LinearProgram::set_objective(std::vector<Rational> coefficients)
{
    if (coefficients.size() != variables_)
        throw DimensionMismatch("objective has " + std::to_string(coefficients.size())
                                + " coefficients, expected " + std::to_string(variables_));
    objective_ = std::move(coefficients);
}

namespace {

// Tableau in canonical form: each row i is basic in column basis[i]; the last
// column holds the right-hand side. `cost` is the reduced-cost row of a
// maximization; cost.back() is minus the current objective value.
struct Tableau
{
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> basis;
    std::vector<Rational> cost;
    std::size_t columns = 0;  // excluding rhs

    void pivot(std::size_t r, std::size_t c)
    {
        auto& prow = rows[r];
        const Rational p = prow[c];
        for (auto& v : prow)
            v /= p;
        auto eliminate = [&](std::vector<Rational>& target) {
            const Rational f = target[c];
            if (f == 0)
                return;
            for (std::size_t j = 0; j <= columns; ++j)
            {
                if (prow[j] != 0)
                    target[j] -= f * prow[j];
            }
        };
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (i != r)
                eliminate(rows[i]);
        }
        eliminate(cost);
        basis[r] = c;
    }

    void price_out()
    {
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            const Rational f = cost[basis[i]];
            if (f == 0)
                continue;
            for (std::size_t j = 0; j <= columns; ++j)
            {
                if (rows[i][j] != 0)
                    cost[j] -= f * rows[i][j];
            }
        }
    }

    // Returns false if unbounded. `allowed` limits the entering columns.
    bool optimize(std::size_t allowed)
    {
        for (;;)
        {
            std::optional<std::size_t> entering;
            for (std::size_t j = 0; j < allowed; ++j)
            {
                if (cost[j] > 0)
                {
                    entering = j;
                    break;
                }
            }
            if (!entering)
                return true;
            const std::size_t c = *entering;
            std::optional<std::size_t> leaving;
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i)
            {
                if (rows[i][c] <= 0)
                    continue;
                Rational ratio = rows[i][columns] / rows[i][c];
                if (!leaving || ratio < best || (ratio == best && basis[i] < basis[*leaving]))
                {
                    leaving = i;
                    best = ratio;
                }
            }
            if (!leaving)
                return false;
            pivot(*leaving, c);
        }
    }
};

}  // namespace

LpResult LinearProgram::solve() const
{
    const std::size_t m = rows_.size();
    const std::size_t n = variables_;

    // Normalize to nonnegative right-hand sides.
    std::vector<Row> rows = rows_;
    for (auto& r : rows)
    {
        if (r.rhs < 0)
        {
            for (auto& v : r.coefficients)
                v = -v;
            r.rhs = -r.rhs;
            if (r.relation == Relation::LessEqual)
                r.relation = Relation::GreaterEqual;
            else if (r.relation == Relation::GreaterEqual)
                r.relation = Relation::LessEqual;
        }
    }

    std::size_t slacks = 0;
    std::size_t artificials = 0;
    for (const auto& r : rows)
    {
        if (r.relation != Relation::Equal)
            ++slacks;
        if (r.relation != Relation::LessEqual)
            ++artificials;
    }

    // Columns: [original | slack/surplus | artificial | rhs]
    Tableau t;
    t.columns = n + slacks + artificials;
    t.rows.assign(m, std::vector<Rational>(t.columns + 1, Rational(0)));
    t.basis.assign(m, 0);
    std::size_t next_slack = n;
    std::size_t next_art = n + slacks;
    for (std::size_t i = 0; i < m; ++i)
    {
        auto& row = t.rows[i];
        for (std::size_t j = 0; j < n; ++j)
            row[j] = rows[i].coefficients[j];
        row[t.columns] = rows[i].rhs;
        switch (rows[i].relation)
        {
            case Relation::LessEqual:
                row[next_slack] = 1;
                t.basis[i] = next_slack++;
                break;
            case Relation::GreaterEqual:
                row[next_slack++] = -1;
                row[next_art] = 1;
                t.basis[i] = next_art++;
                break;
            case Relation::Equal:
                row[next_art] = 1;
                t.basis[i] = next_art++;
                break;
        }
    }

    const std::size_t first_art = n + slacks;
    LpResult result;

    // Phase I: maximize -sum(artificials).
    if (artificials > 0)
    {
        t.cost.assign(t.columns + 1, Rational(0));
        for (std::size_t j = first_art; j < t.columns; ++j)
            t.cost[j] = -1;
        t.price_out();
        t.optimize(t.columns);
        if (t.cost[t.columns] != 0)  // -(phase I objective) = sum of artificials
        {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < t.rows.size();)
        {
            if (t.basis[i] < first_art)
            {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < first_art; ++j)
            {
                if (t.rows[i][j] != 0)
                {
                    col = j;
                    break;
                }
            }
            if (col)
            {
                t.pivot(i, *col);
                ++i;
            }
            else
            {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    // Phase II over the non-artificial columns.
    t.cost.assign(t.columns + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        t.cost[j] = objective_[j];
    t.price_out();
    if (!t.optimize(first_art))
    {
        result.status = LpStatus::Unbounded;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.values.assign(n, Rational(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        if (t.basis[i] < n)
            result.values[t.basis[i]] = t.rows[i][t.columns];
    }
    result.objective = Rational(0);
    for (std::size_t j = 0; j < n; ++j)
        result.objective += objective_[j] * result.values[j];
    return result;
}

}  // namespace cohere
