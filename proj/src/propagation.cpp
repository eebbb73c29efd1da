#include "cohere/propagation.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <vector>

#include "cohere/errors.hpp"

namespace cohere {

std::string to_string(Exactness e)
{
    switch (e)
    {
        case Exactness::ClosedForm: return "closed-form";
        case Exactness::CertifiedByLp: return "certified-by-LP";
        case Exactness::Bisection: return "bisection";
    }
    return "unknown";
}

namespace {

void require_unit(const Rational& v, const char* name)
{
    if (v < 0 || v > 1)
        throw OutOfRange(std::string(name) + " = " + to_string(v) + " is outside [0, 1]");
}

}  // namespace

ExtensionInterval mp_bounds(const Rational& x, const Rational& y)
{
    require_unit(x, "x");
    require_unit(y, "y");
    ExtensionInterval out;
    out.lower = x * y;
    out.upper = x * y + 1 - x;
    out.exactness = Exactness::ClosedForm;
    return out;
}

Rational product_prevision(const Rational& x, const Rational& mu)
{
    require_unit(x, "x");
    require_unit(mu, "mu");
    return mu * x;
}

namespace {

// Interior search gives up below this dyadic level (at most 2^10 + 1 probes).
constexpr unsigned max_grid_depth = 10;

class ExtensionSearch
{
    public:
        ExtensionSearch(const Assessment& premises, const Crq& target, const ExtensionOptions& options)
            : premises_(premises), target_(target), options_(options),
              step_(pow2_neg(options.tolerance_exponent))
        {
        }

        bool coherent(const Rational& z) const
        {
            return check_coherence(premises_.extended(target_, z), options_.coherence).coherent;
        }

        // Snap candidates: 0, 1, the premise values v and the products v*w, v*w + 1 - v.
        std::vector<Rational> candidates() const
        {
            std::vector<Rational> values;
            for (const auto& item : premises_.items())
                values.push_back(item.value);
            std::vector<Rational> out{Rational(0), Rational(1)};
            for (const auto& v : values)
            {
                out.push_back(v);
                for (const auto& w : values)
                {
                    out.push_back(v * w);
                    out.push_back(v * w + 1 - v);
                }
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }

        std::optional<Rational> interior_point(const Rational& lo, const Rational& hi) const
        {
            for (const auto& c : candidates())
            {
                if (c >= lo && c <= hi && coherent(c))
                    return c;
            }
            // Dyadic grid, coarse to fine.
            const Rational width = hi - lo;
            const unsigned depth = std::min(options_.tolerance_exponent, max_grid_depth);
            for (unsigned level = 0; level <= depth; ++level)
            {
                const Rational cell = width * pow2_neg(level);
                const unsigned long count = 1ul << level;
                for (unsigned long j = 0; j <= count; ++j)
                {
                    if (level > 0 && j % 2 == 0)
                        continue;
                    Rational z = lo + cell * Rational(static_cast<long>(j));
                    if (coherent(z))
                        return z;
                }
            }
            return std::nullopt;
        }

        // c is certified when it is coherent and both c -/+ 2^-k and c -/+ 2^-2k are not.
        bool certified(const Rational& c, bool lower) const
        {
            const Rational fine = step_ * step_;
            auto outside = [&](const Rational& d) { return lower ? Rational(c - d) : Rational(c + d); };
            return !coherent(outside(step_)) && !coherent(outside(fine));
        }

        // One end of the coherent set. `inside` is coherent, `bound` is the end of the search range.
        std::pair<Rational, bool> endpoint(const Rational& inside, const Rational& bound, bool lower) const
        {
            if (coherent(bound))
                return {bound, certified(bound, lower)};

            Rational good = inside;
            Rational bad = bound;
            while ((lower ? good - bad : bad - good) > step_)
            {
                Rational mid = (good + bad) / 2;
                if (coherent(mid))
                    good = mid;
                else
                    bad = mid;
            }

            // The boundary lies strictly beyond `bad` and no further in than `good`.
            auto in_bracket = [&](const Rational& c) { return lower ? (c > bad && c <= good) : (c < bad && c >= good); };
            std::vector<Rational> snaps;
            for (const auto& c : candidates())
            {
                if (in_bracket(c))
                    snaps.push_back(c);
            }
            if (auto s = simplest_between(bad, good); in_bracket(s))
                snaps.push_back(s);
            std::sort(snaps.begin(), snaps.end());
            snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
            if (!lower)
                std::reverse(snaps.begin(), snaps.end());
            // The outermost coherent snap is the closest one to the boundary.
            for (const auto& c : snaps)
            {
                if (!coherent(c))
                    continue;
                if (certified(c, lower))
                    return {c, true};
                break;
            }
            return {good, false};
        }

    private:
        const Assessment& premises_;
        const Crq& target_;
        const ExtensionOptions& options_;
        Rational step_;
};

}  // namespace

ExtensionInterval extension_interval(const Assessment& premises, const Crq& target, const ExtensionOptions& options)
{
    if (premises.size() + 1 > options.coherence.family_cap)
        throw CapExceeded("family of " + std::to_string(premises.size() + 1) + " exceeds cap "
                          + std::to_string(options.coherence.family_cap));
    if (premises.size() > 0 && !premises.depends_on(target.own_symbol()))
    {
        auto verdict = check_coherence(premises, options.coherence);
        if (!verdict.coherent)
            throw IncoherentPremises("premises are incoherent");
    }

    ExtensionSearch search(premises, target, options);
    const Rational lo = target.range_low();
    const Rational hi = target.range_high();
    auto inside = search.interior_point(lo, hi);
    if (!inside)
    {
        if (premises.depends_on(target.own_symbol()))
            throw IncoherentPremises("no coherent value of '" + target.label() + "' exists for the premises");
        throw ExtensionError("no coherent value of '" + target.label() + "' located at resolution 2^-"
                             + std::to_string(options.tolerance_exponent));
    }

    auto lower_job = std::async(std::launch::async, [&] { return search.endpoint(*inside, lo, true); });
    auto upper = search.endpoint(*inside, hi, false);
    auto lower = lower_job.get();

    ExtensionInterval out;
    out.lower = lower.first;
    out.upper = upper.first;
    out.tolerance_exponent = options.tolerance_exponent;
    out.exactness = (lower.second && upper.second) ? Exactness::CertifiedByLp : Exactness::Bisection;

    if (out.lower < out.upper && !search.coherent((out.lower + out.upper) / 2))
        throw ExtensionError("coherent values of '" + target.label() + "' do not form an interval");
    return out;
}

ModusPonensProblem modus_ponens_problem(const Rational& x, const Rational& y, bool classical)
{
    auto reg = make_registry(classical ? std::vector<std::string>{"A", "C"}
                                       : std::vector<std::string>{"A", "C", "H"});
    const Event a = Event::atom("A");
    const Event c = Event::atom("C");
    const Event h = classical ? Event::top() : Event::atom("H");
    Crq ah = conditional_event(reg, a, h, Symbol("x"));
    Crq c_given_ah = iterated_simple(ah, c, Symbol("y"));
    Crq target = conditional_event(reg, c, Event::top(), Symbol("z"));
    Assessment premises(reg, {{ah, x}, {c_given_ah, y}});
    return ModusPonensProblem{std::move(premises), std::move(target)};
}

bool verify_decomposition(const RegistryPtr& registry, const Event& a, const Event& b, const Event& h,
                          const Event& k, const DecompositionValuation& valuation)
{
    if (is_impossible(*registry, h) || is_impossible(*registry, k))
        throw PreconditionFailed("decomposition needs possible conditioning events");
    const Symbol x("x"), y("y"), z1("z1"), z2("z2");
    Crq ah = conditional_event(registry, a, h, x);
    Crq bk = conditional_event(registry, b, k, y);
    Crq first = conjunction(ah, bk, z1);
    Crq second = conjunction(negate(ah), bk, z2);
    const Valuation v{{x, valuation.x}, {y, valuation.y}, {z1, valuation.z1}, {z2, valuation.z2}};
    for (std::size_t w = 0; w < bk.payoffs().size(); ++w)
    {
        if (first.payoffs()[w].evaluate(v) + second.payoffs()[w].evaluate(v) != bk.payoffs()[w].evaluate(v))
            return false;
    }
    return true;
}

}  // namespace cohere
