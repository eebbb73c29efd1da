#pragma once

#include <string>

#include "cohere/coherence.hpp"

namespace cohere {

/**
 * Propagation of previsions from premises to a target quantity.
 *
 * The generic route (extension_interval) treats check_coherence as an exact
 * oracle: it bisects both ends of the set of coherent extensions, snaps
 * each end to a simple exact candidate and certifies it. The closed forms
 * (product formula, generalized modus ponens) are computed independently so
 * the two routes can be compared.
 *
 * The auxiliary prevision t = P[C|(!A|H)] that parameterizes the modus
 * ponens conclusion (z = xy + (1-x)t) is never materialized; sweeping z
 * covers it implicitly.
 */
enum class Exactness { ClosedForm, CertifiedByLp, Bisection };

std::string to_string(Exactness e);

struct ExtensionInterval
{
    Rational lower;
    Rational upper;
    Exactness exactness = Exactness::ClosedForm;
    /// k of the 2^-k resolution used; meaningful for the engine routes.
    unsigned tolerance_exponent = 0;
};

/// [xy, xy + 1 - x]. Throws OutOfRange unless x, y are in [0, 1].
ExtensionInterval mp_bounds(const Rational& x, const Rational& y);

/// mu * x. Throws OutOfRange unless both are in [0, 1].
Rational product_prevision(const Rational& x, const Rational& mu);

struct ExtensionOptions
{
    unsigned tolerance_exponent = 20;
    CoherenceOptions coherence;
};

/**
 * Least and greatest z such that premises + (target = z) is coherent.
 * Throws IncoherentPremises, CapExceeded, ExtensionError (no coherent value
 * located, or the coherent set is not an interval at the probed points).
 */
ExtensionInterval extension_interval(const Assessment& premises, const Crq& target,
                                     const ExtensionOptions& options = {});

/// Premises {A|H = x, C|(A|H) = y} and target C over atoms A, C, H (H = TOP when classical).
struct ModusPonensProblem
{
    Assessment premises;
    Crq target;
};

ModusPonensProblem modus_ponens_problem(const Rational& x, const Rational& y, bool classical = false);

struct DecompositionValuation
{
    Rational x;   // P(A|H)
    Rational y;   // P(B|K)
    Rational z1;  // P[(A|H) & (B|K)]
    Rational z2;  // P[(!A|H) & (B|K)]
};

/**
 * Pointwise check of B|K = (A|H)&(B|K) + (!A|H)&(B|K) at every constituent.
 * Throws PreconditionFailed if H or K is impossible.
 */
bool verify_decomposition(const RegistryPtr& registry, const Event& a, const Event& b, const Event& h,
                          const Event& k, const DecompositionValuation& valuation);

}  // namespace cohere
