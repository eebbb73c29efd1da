#include "doctest.h"

#include <algorithm>
#include <random>

#include "cohere/coherence.hpp"
#include "cohere/errors.hpp"
#include "oracles.hpp"

using namespace cohere;
using oracle::R;
using oracle::S;
using oracle::V;

namespace {

const Event A = Event::atom("A");
const Event B = Event::atom("B");
const Event C = Event::atom("C");
const Event H = Event::atom("H");
const Event K = Event::atom("K");

struct CubeFamily
{
    RegistryPtr reg = make_registry({"A", "C", "H"});
    Crq ah = conditional_event(reg, A, H, S("x"));
    Crq c_ah = iterated_simple(ah, C, S("y"));
    Crq c_nah = iterated_simple(negate(ah), C, S("z"));

    Assessment at(const Rational& x, const Rational& y, const Rational& z) const
    {
        return Assessment(reg, {{ah, x}, {c_ah, y}, {c_nah, z}});
    }
};

std::vector<std::string> rendered(const std::vector<Polynomial>& pt)
{
    std::vector<std::string> out;
    for (const auto& p : pt)
        out.push_back(p.to_string());
    return out;
}

std::vector<std::vector<std::string>> rendered_rows(const PointTable& t)
{
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : t.symbolic_points)
        rows.push_back(rendered(pt));
    std::sort(rows.begin(), rows.end());
    return rows;
}

// Independent check of a Dutch book: gain >= epsilon on every world where some bet is on.
bool book_is_valid(const Assessment& a, const DutchBook& book)
{
    if (book.guaranteed_gain <= 0)
        return false;
    const auto& val = a.valuation();
    bool any = false;
    for (const auto& w : enumerate_constituents(a.registry()))
    {
        Rational gain = 0;
        bool on_any = false;
        for (std::size_t j = 0; j < book.subset.size(); ++j)
        {
            const auto& item = a.items()[book.subset[j]];
            if (abs(book.stakes[j]) > 1)
                return false;
            if (!support(item.quantity, val).test(w.position()))
                continue;
            on_any = true;
            gain += book.stakes[j] * (payoff_at(item.quantity, w, val) - item.value);
        }
        if (on_any)
        {
            any = true;
            if (gain < book.guaranteed_gain)
                return false;
        }
    }
    return any;
}

}  // namespace

TEST_CASE("subsets are ordered by size then lexicographically")
{
    auto s = subsets_by_size(3);
    std::vector<std::vector<std::size_t>> expected{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    CHECK(s == expected);
    CHECK(subsets_by_size(5).size() == 31);
}

TEST_CASE("assessment derives linked symbols and rejects conflicts")
{
    auto reg = make_registry({"A", "H"});
    Crq ah = conditional_event(reg, A, H, S("x"));
    Crq n = negate(ah);
    Assessment a(reg, {{ah, R(1, 3)}});
    CHECK(a.valuation().at(S("x")) == R(1, 3));
    Assessment b(reg, {{n, R(1, 4)}});
    CHECK(b.valuation().at(S("x")) == R(3, 4));
    CHECK_THROWS_AS(Assessment(reg, {{ah, R(1, 3)}, {ah, R(1, 2)}}), InvalidAssessment);

    Crq it = iterated_simple(ah, H, S("y"));
    Assessment missing(reg, {{it, R(1, 2)}});
    CHECK(missing.missing_symbols() == std::set<Symbol>{S("x")});
    CHECK_THROWS_AS(check_coherence(missing), MissingSymbol);
    CHECK(missing.depends_on(S("x")));
    CHECK_FALSE(missing.depends_on(S("q")));
}

TEST_CASE("cube family points are the six symbolic Q_h")
{
    CubeFamily f;
    PointTable t = build_points(f.at(R(1, 2), R(1, 2), R(1, 2)), {0, 1, 2});
    REQUIRE(t.points.size() == 6);
    CHECK(t.dimension == 3);
    Polynomial x = V("x"), y = V("y"), z = V("z");
    std::vector<std::vector<Polynomial>> q{{1, 1, z},
                                           {0, y, 1},
                                           {1, 0, z},
                                           {0, y, 0},
                                           {x, x + y * (1 - x), (1 - x) + x * z},
                                           {x, y * (1 - x), x * z}};
    std::vector<std::vector<std::string>> expected;
    for (const auto& p : q)
        expected.push_back(rendered(p));
    std::sort(expected.begin(), expected.end());
    CHECK(rendered_rows(t) == expected);

    // Q5 = x Q1 + (1-x) Q2 and Q6 = x Q3 + (1-x) Q4, as polynomial identities.
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(q[4][i] == x * q[0][i] + (1 - x) * q[1][i]);
        CHECK(q[5][i] == x * q[2][i] + (1 - x) * q[3][i]);
    }
}

TEST_CASE("cube family subset {1,2} at x = 0 has three constituents")
{
    CubeFamily f;
    PointTable t = build_points(f.at(R(0), R(1, 3), R(1, 2)), {0, 1});
    REQUIRE(t.points.size() == 3);
    Polynomial y = V("y");
    std::vector<std::vector<std::string>> expected{rendered({1, 1}), rendered({0, y}), rendered({1, 0})};
    std::sort(expected.begin(), expected.end());
    CHECK(rendered_rows(t) == expected);
}

TEST_CASE("single conditional event has points 1 and 0")
{
    auto reg = make_registry({"A", "H"});
    Assessment a(reg, {{conditional_event(reg, A, H, S("x")), R(1, 2)}});
    PointTable t = build_points(a, {0});
    REQUIRE(t.points.size() == 2);
    std::vector<Rational> vals{t.points[0][0], t.points[1][0]};
    std::sort(vals.begin(), vals.end());
    CHECK(vals == std::vector<Rational>{0, 1});
}

TEST_CASE("point table invariant against direct payoffs")
{
    CubeFamily f;
    Assessment a = f.at(R(1, 3), R(3, 4), R(1, 5));
    PointTable t = build_points(a, {0, 1, 2});
    const auto& val = a.valuation();
    for (std::size_t h = 0; h < t.points.size(); ++h)
    {
        for (const auto& w : enumerate_constituents(f.reg))
        {
            if (!t.constituents[h].test(w.position()))
                continue;
            for (std::size_t i = 0; i < 3; ++i)
            {
                const auto& item = a.items()[i];
                Rational expected =
                    support(item.quantity, val).test(w.position()) ? payoff_at(item.quantity, w, val) : item.value;
                CHECK(t.points[h][i] == expected);
            }
        }
    }
}

TEST_CASE("solve_sigma")
{
    CubeFamily f;
    Assessment a = f.at(R(1, 2), R(1, 2), R(1, 2));
    PointTable t = build_points(a, {0, 1, 2});
    std::vector<Rational> m{R(1, 2), R(1, 2), R(1, 2)};
    auto sol = solve_sigma(t, m);
    REQUIRE(sol);
    Rational total = 0;
    std::vector<Rational> combo(3);
    for (std::size_t h = 0; h < t.points.size(); ++h)
    {
        CHECK(sol->lambdas[h] >= 0);
        total += sol->lambdas[h];
        for (std::size_t i = 0; i < 3; ++i)
            combo[i] += sol->lambdas[h] * t.points[h][i];
    }
    CHECK(total == 1);
    CHECK(combo == m);

    // The closed-form weights xy, z(1-x), (1-y)x, (1-x)(1-z) on Q1..Q4 also solve it.
    std::vector<std::vector<Rational>> q{{1, 1, R(1, 2)}, {0, R(1, 2), 1}, {1, 0, R(1, 2)}, {0, R(1, 2), 0}};
    std::vector<Rational> lam{R(1, 4), R(1, 4), R(1, 4), R(1, 4)};
    std::vector<Rational> sum(3);
    for (std::size_t h = 0; h < 4; ++h)
        for (std::size_t i = 0; i < 3; ++i)
            sum[i] += lam[h] * q[h][i];
    CHECK(sum == m);

    PointTable line;
    line.points = {{R(1)}, {R(0)}};
    line.dimension = 1;
    CHECK_FALSE(solve_sigma(line, {R(3, 2)}));
    CHECK(solve_sigma(line, {R(1, 3)}));
    CHECK_THROWS_AS(solve_sigma(line, {R(1), R(2)}), DimensionMismatch);

    // (y, z) = y Q1 + (1 - y) Q3 on subset {2,3}
    PointTable yz;
    yz.points = {{R(1), R(2, 5)}, {R(0), R(2, 5)}};
    yz.dimension = 2;
    auto s = solve_sigma(yz, {R(1, 3), R(2, 5)});
    REQUIRE(s);
    CHECK(s->lambdas[0] == R(1, 3));
}

TEST_CASE("check_coherence examples")
{
    CubeFamily f;
    CHECK(check_coherence(f.at(R(1, 2), R(1, 2), R(1, 2))).coherent);
    CHECK(check_coherence(f.at(R(0), R(1), R(0))).coherent);

    auto reg = make_registry({"A", "H"});
    Crq ah = conditional_event(reg, A, H, S("x"));
    CHECK(check_coherence(Assessment(reg, {{ah, R(1, 2)}})).coherent);
    auto v = check_coherence(Assessment(reg, {{ah, R(3, 2)}}));
    CHECK_FALSE(v.coherent);
    CHECK(v.witness == std::vector<std::size_t>{0});

    auto reg4 = make_registry({"A", "B", "H", "K"});
    Crq x = conditional_event(reg4, A, H, S("x"));
    Crq y = conditional_event(reg4, B, K, S("y"));
    Crq it = iterated(x, y, S("mu"), S("z"));
    Crq conj = conjunction(x, y, S("z"));
    Valuation params{{S("y"), R(1, 2)}};
    auto bad = Assessment(reg4, {{x, R(1, 2)}, {it, R(1, 2)}, {conj, R(1, 2)}}, params);
    CHECK_FALSE(check_coherence(bad).coherent);
    auto good = Assessment(reg4, {{x, R(1, 2)}, {it, R(1, 2)}, {conj, R(1, 4)}}, params);
    CHECK(check_coherence(good).coherent);
}

TEST_CASE("witness is the smallest failing subset")
{
    auto reg = make_registry({"A", "B"});
    Crq a = conditional_event(reg, A, Event::top(), S("a"));
    Crq b = conditional_event(reg, B, Event::top(), S("b"));
    Crq ab = conditional_event(reg, A & B, Event::top(), S("c"));
    // Each is fine alone; {a, ab} violates P(AB) <= P(A).
    auto v = check_coherence(Assessment(reg, {{a, R(1, 4)}, {b, R(1, 2)}, {ab, R(1, 2)}}));
    CHECK_FALSE(v.coherent);
    CHECK(v.witness == std::vector<std::size_t>{0, 2});
    auto book = find_dutch_book(Assessment(reg, {{a, R(1, 4)}, {b, R(1, 2)}, {ab, R(1, 2)}}));
    REQUIRE(book);
    CHECK(book->subset == std::vector<std::size_t>{0, 2});
}

TEST_CASE("negation link: A|H and !A|H coherent only when they sum to one")
{
    auto reg = make_registry({"A", "H"});
    Crq ah = conditional_event(reg, A, H, S("x"));
    Crq nah = conditional_event(reg, !A, H, S("w"));
    for (long i = 0; i <= 4; ++i)
    {
        for (long j = 0; j <= 4; ++j)
        {
            Assessment a(reg, {{ah, R(i, 4)}, {nah, R(j, 4)}});
            CHECK(check_coherence(a).coherent == (i + j == 4));
        }
    }
}

TEST_CASE("Dutch book examples")
{
    auto reg = make_registry({"A", "H"});
    Crq ah = conditional_event(reg, A, H, S("x"));
    Assessment two(reg, {{ah, R(2)}});
    auto book = find_dutch_book(two);
    REQUIRE(book);
    CHECK(book->stakes == std::vector<Rational>{R(-1)});
    CHECK(book_is_valid(two, *book));

    auto reg3 = make_registry({"A", "C", "H"});
    Crq x = conditional_event(reg3, A, H, S("x"));
    Crq y = iterated_simple(x, C, S("y"));
    Crq c = conditional_event(reg3, C, Event::top(), S("c"));
    Assessment mp(reg3, {{x, R(1)}, {y, R(1)}, {c, R(0)}});
    auto b2 = find_dutch_book(mp);
    REQUIRE(b2);
    CHECK(book_is_valid(mp, *b2));
    CHECK_FALSE(check_coherence(mp).coherent);

    CubeFamily f;
    CHECK_FALSE(find_dutch_book(f.at(R(1, 4), R(3, 4), R(1))));
}

TEST_CASE("cap")
{
    auto reg = make_registry({"A", "H"});
    std::vector<AssessedItem> items;
    for (int i = 0; i < 13; ++i)
        items.push_back({conditional_event(reg, A, H, S(("x" + std::to_string(i)).c_str())), R(1, 2)});
    Assessment a(reg, items);
    CHECK_THROWS_AS(check_coherence(a), CapExceeded);
    CHECK_THROWS_AS(find_dutch_book(a), CapExceeded);
    CoherenceOptions wide;
    wide.family_cap = 13;
    items.erase(items.begin() + 3, items.end());
    CHECK(check_coherence(Assessment(reg, items), wide).coherent);
}

TEST_CASE("full-family failure implies an incoherent verdict")
{
    std::mt19937 rng(17);
    CubeFamily f;
    int checked = 0;
    for (int i = 0; i < 200 && checked < 25; ++i)
    {
        Assessment a = f.at(oracle::random_rational(rng, R(-1, 2), R(3, 2), 4),
                            oracle::random_rational(rng, R(-1, 2), R(3, 2), 4),
                            oracle::random_rational(rng, R(-1, 2), R(3, 2), 4));
        PointTable t = build_points(a, {0, 1, 2});
        if (solve_sigma(t, assessed_values(a, {0, 1, 2})))
            continue;
        ++checked;
        CHECK_FALSE(check_coherence(a).coherent);
    }
    CHECK(checked > 0);
}

TEST_CASE("engine agrees with the definition-level oracle (randomized)")
{
    std::mt19937 rng(1234);
    auto reg = make_registry({"A", "B", "C"});
    const std::vector<Event> events{A, B, C, A & B, A | C, !B, B & !C, Event::top()};
    auto pick = [&]() { return events[rng() % events.size()]; };
    int coherent = 0, incoherent = 0;
    for (int trial = 0; trial < 120; ++trial)
    {
        std::vector<AssessedItem> items;
        Valuation params;
        std::size_t n = 1 + rng() % 3;
        for (std::size_t i = 0; i < n; ++i)
        {
            Symbol s("s" + std::to_string(i));
            Crq ce = conditional_event(reg, pick(), pick() | A, s);
            Crq q = ce;
            switch (rng() % 4)
            {
                case 0: break;
                case 1: q = negate(ce, Symbol("n" + std::to_string(i))); break;
                case 2:
                    q = iterated_simple(ce, pick(), Symbol("t" + std::to_string(i)));
                    params[s] = oracle::random_rational(rng, 0, 1, 3);
                    break;
                default:
                {
                    Crq other = conditional_event(reg, pick(), pick() | B, Symbol("o" + std::to_string(i)));
                    q = conjunction(ce, other, Symbol("c" + std::to_string(i)));
                    params[s] = oracle::random_rational(rng, 0, 1, 3);
                    params[other.own_symbol()] = oracle::random_rational(rng, 0, 1, 3);
                }
            }
            items.push_back({q, oracle::random_rational(rng, R(-1, 4), R(5, 4), 4)});
        }
        Assessment a(reg, items, params);
        bool expected = oracle::coherent_by_definition(a);
        (expected ? coherent : incoherent)++;
        INFO("trial " << trial);
        auto verdict = check_coherence(a);
        CHECK(verdict.coherent == expected);
        auto book = find_dutch_book(a);
        CHECK(static_cast<bool>(book) == !expected);
        if (book)
            CHECK(book_is_valid(a, *book));
    }
    CHECK(coherent > 10);
    CHECK(incoherent > 10);
}
