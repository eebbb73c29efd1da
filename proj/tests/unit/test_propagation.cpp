#include "doctest.h"

#include "cohere/errors.hpp"
#include "cohere/propagation.hpp"
#include "oracles.hpp"

using namespace cohere;
using oracle::R;
using oracle::S;

namespace {

const Event A = Event::atom("A");
const Event B = Event::atom("B");
const Event C = Event::atom("C");
const Event H = Event::atom("H");
const Event K = Event::atom("K");

}  // namespace

TEST_CASE("mp_bounds")
{
    auto one = mp_bounds(1, 1);
    CHECK(one.lower == 1);
    CHECK(one.upper == 1);
    CHECK(one.exactness == Exactness::ClosedForm);
    auto half = mp_bounds(R(1, 2), R(1, 2));
    CHECK(half.lower == R(1, 4));
    CHECK(half.upper == R(3, 4));
    for (long j = 0; j <= 4; ++j)
    {
        auto vac = mp_bounds(0, R(j, 4));
        CHECK(vac.lower == 0);
        CHECK(vac.upper == 1);
    }
    CHECK_THROWS_AS(mp_bounds(R(3, 2), R(1, 2)), OutOfRange);
    CHECK_THROWS_AS(mp_bounds(R(1, 2), R(-1)), OutOfRange);
    CHECK(to_string(Exactness::CertifiedByLp) == "certified-by-LP");
}

TEST_CASE("product_prevision")
{
    CHECK(product_prevision(R(1, 2), R(1, 3)) == R(1, 6));
    CHECK(product_prevision(0, R(5, 7)) == 0);
    CHECK(product_prevision(1, R(5, 7)) == R(5, 7));
    CHECK_THROWS_AS(product_prevision(R(2), R(1, 2)), OutOfRange);
}

TEST_CASE("extension interval for modus ponens premises")
{
    for (bool classical : {false, true})
    {
        auto p = modus_ponens_problem(R(1, 2), R(1, 2), classical);
        auto iv = extension_interval(p.premises, p.target);
        CHECK(iv.lower == R(1, 4));
        CHECK(iv.upper == R(3, 4));
        CHECK(iv.exactness == Exactness::CertifiedByLp);
    }
}

TEST_CASE("interval sandwich")
{
    for (auto [x, y] : std::vector<std::pair<Rational, Rational>>{{R(1, 3), R(2, 3)}, {R(3, 4), R(1, 4)},
                                                                  {R(1, 5), R(1)}})
    {
        auto p = modus_ponens_problem(x, y);
        auto iv = extension_interval(p.premises, p.target);
        CHECK(iv.lower == x * y);
        CHECK(iv.upper == x * y + 1 - x);
        CHECK(check_coherence(p.premises.extended(p.target, (iv.lower + iv.upper) / 2)).coherent);
        CHECK(check_coherence(p.premises.extended(p.target, iv.lower)).coherent);
        CHECK(check_coherence(p.premises.extended(p.target, iv.upper)).coherent);
        if (iv.lower - R(1, 1000) >= 0)
            CHECK_FALSE(check_coherence(p.premises.extended(p.target, iv.lower - R(1, 1000))).coherent);
        if (iv.upper + R(1, 1000) <= 1)
            CHECK_FALSE(check_coherence(p.premises.extended(p.target, iv.upper + R(1, 1000))).coherent);
    }
}

TEST_CASE("product formula as a point interval")
{
    auto reg = make_registry({"A", "B", "H", "K"});
    Crq x = conditional_event(reg, A, H, S("x"));
    Crq y = conditional_event(reg, B, K, S("y"));
    Crq it = iterated(x, y, S("mu"), S("z"));
    Crq conj = conjunction(x, y, S("z"));
    Assessment premises(reg, {{x, R(1, 2)}, {it, R(1, 3)}}, {{S("y"), R(1, 2)}});
    auto iv = extension_interval(premises, conj);
    CHECK(iv.lower == R(1, 6));
    CHECK(iv.upper == R(1, 6));
    CHECK(iv.exactness == Exactness::CertifiedByLp);
}

TEST_CASE("plain conditional target over coherent premises")
{
    // P(A) = 1/2, P(B|A) = 1/2 -> P(A & B) = 1/4 exactly.
    auto reg = make_registry({"A", "B"});
    Crq a = conditional_event(reg, A, Event::top(), S("a"));
    Crq ba = conditional_event(reg, B, A, S("b"));
    Crq ab = conditional_event(reg, A & B, Event::top(), S("c"));
    auto iv = extension_interval(Assessment(reg, {{a, R(1, 2)}, {ba, R(1, 2)}}), ab);
    CHECK(iv.lower == R(1, 4));
    CHECK(iv.upper == R(1, 4));

    // Frechet bounds for P(A & B) from P(A) = 2/3, P(B) = 1/2.
    Crq b = conditional_event(reg, B, Event::top(), S("bb"));
    auto fr = extension_interval(Assessment(reg, {{a, R(2, 3)}, {b, R(1, 2)}}), ab);
    CHECK(fr.lower == R(1, 6));
    CHECK(fr.upper == R(1, 2));
    CHECK(fr.exactness == Exactness::CertifiedByLp);
}

TEST_CASE("non-dyadic endpoints certify at a coarse tolerance")
{
    auto p = modus_ponens_problem(R(1, 3), R(1, 7));
    ExtensionOptions opts;
    opts.tolerance_exponent = 8;
    auto iv = extension_interval(p.premises, p.target, opts);
    CHECK(iv.lower == R(1, 21));
    CHECK(iv.upper == R(1, 21) + R(2, 3));
}

TEST_CASE("incoherent premises are rejected")
{
    auto p = modus_ponens_problem(R(1, 2), R(1, 2));
    auto reg = p.premises.registry();
    Crq extra = conditional_event(reg, A, H, S("w"));
    Assessment bad = p.premises.extended(extra, R(1, 3));  // A|H at 1/2 and 1/3
    CHECK_THROWS_AS(extension_interval(bad, p.target), IncoherentPremises);
}

TEST_CASE("decomposition with logical relations")
{
    auto reg = make_registry({"A", "B", "H", "K"});
    DecompositionValuation v{R(1, 3), R(3, 5), R(1, 5), R(2, 5)};
    CHECK(verify_decomposition(reg, A, B, H, K, v));
    CHECK(verify_decomposition(reg, A, B & K, H, K, v));      // B implies K
    CHECK(verify_decomposition(reg, A & H, B, H, H | K, v));  // H implies K
    CHECK(verify_decomposition(reg, A, B, H, !H, v));         // H, K incompatible
    DecompositionValuation off{R(1, 3), R(3, 5), R(1, 5), R(1, 5)};
    CHECK_FALSE(verify_decomposition(reg, A, B, H, K, off));
}
