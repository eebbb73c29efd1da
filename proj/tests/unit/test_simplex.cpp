#include "doctest.h"

#include <random>

#include "cohere/errors.hpp"
#include "cohere/simplex.hpp"
#include "oracles.hpp"

using namespace cohere;
using oracle::R;

namespace {

std::vector<Rational> row(std::initializer_list<long> v)
{
    std::vector<Rational> out;
    for (long x : v)
        out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("textbook maximization")
{
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    LinearProgram lp(2);
    lp.add_constraint(row({1, 0}), Relation::LessEqual, 4);
    lp.add_constraint(row({0, 2}), Relation::LessEqual, 12);
    lp.add_constraint(row({3, 2}), Relation::LessEqual, 18);
    lp.set_objective(row({3, 5}));
    LpResult r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == 36);
    CHECK(r.values == row({2, 6}));
}

TEST_CASE("infeasible, unbounded and equality systems")
{
    LinearProgram bad(1);
    bad.add_constraint(row({1}), Relation::GreaterEqual, 2);
    bad.add_constraint(row({1}), Relation::LessEqual, 1);
    CHECK(bad.solve().status == LpStatus::Infeasible);

    LinearProgram open(2);
    open.add_constraint(row({1, -1}), Relation::LessEqual, 1);
    open.set_objective(row({1, 0}));
    CHECK(open.solve().status == LpStatus::Unbounded);

    // Redundant equalities and a negative right-hand side.
    LinearProgram eq(3);
    eq.add_constraint(row({1, 1, 1}), Relation::Equal, 1);
    eq.add_constraint(row({2, 2, 2}), Relation::Equal, 2);
    eq.add_constraint(row({-1, 0, 1}), Relation::Equal, R(-1, 2));
    eq.set_objective(row({0, 1, 0}));
    LpResult r = eq.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == R(1, 2));
    CHECK(r.values[0] - r.values[2] == R(1, 2));

    LinearProgram wrong(2);
    CHECK_THROWS_AS(wrong.add_constraint(row({1}), Relation::Equal, 0), DimensionMismatch);
}

TEST_CASE("degenerate problem that cycles without an anti-cycling rule")
{
    // Beale's example; optimum 1/20.
    LinearProgram lp(4);
    lp.add_constraint({R(1, 4), R(-8), R(-1), R(9)}, Relation::LessEqual, 0);
    lp.add_constraint({R(1, 2), R(-12), R(-1, 2), R(3)}, Relation::LessEqual, 0);
    lp.add_constraint({R(0), R(0), R(1), R(0)}, Relation::LessEqual, 1);
    lp.set_objective({R(3, 4), R(-20), R(1, 2), R(-6)});
    LpResult r = lp.solve();
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == R(5, 4));
}

TEST_CASE("feasibility agrees with the Caratheodory hull oracle (randomized)")
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 150; ++trial)
    {
        std::size_t d = 1 + trial % 3;
        std::size_t n = 1 + rng() % 5;
        std::vector<oracle::Point> pts(n, oracle::Point(d));
        for (auto& p : pts)
            for (auto& c : p)
                c = oracle::random_rational(rng, -1, 2, 3);
        oracle::Point m(d);
        for (auto& c : m)
            c = oracle::random_rational(rng, -1, 2, 4);
        if (trial % 4 == 0)
        {
            // Force an interior or boundary point.
            m = oracle::Point(d);
            for (std::size_t i = 0; i < d; ++i)
                m[i] = (pts[0][i] + pts[n - 1][i]) / 2;
        }
        LinearProgram lp(n);
        for (std::size_t i = 0; i < d; ++i)
        {
            std::vector<Rational> a(n);
            for (std::size_t j = 0; j < n; ++j)
                a[j] = pts[j][i];
            lp.add_constraint(a, Relation::Equal, m[i]);
        }
        lp.add_constraint(std::vector<Rational>(n, Rational(1)), Relation::Equal, 1);
        LpResult r = lp.solve();
        bool expected = oracle::hull_contains(pts, m);
        CHECK((r.status == LpStatus::Optimal) == expected);
        if (r.status == LpStatus::Optimal)
        {
            for (std::size_t i = 0; i < d; ++i)
            {
                Rational s = 0;
                for (std::size_t j = 0; j < n; ++j)
                {
                    CHECK(r.values[j] >= 0);
                    s += r.values[j] * pts[j][i];
                }
                CHECK(s == m[i]);
            }
        }
    }
}
