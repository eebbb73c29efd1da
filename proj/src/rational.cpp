#include "cohere/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>

namespace cohere {

namespace {

using Integer = boost::multiprecision::mpz_int;

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
    {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

Integer floor_of(const Rational& r)
{
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    Integer q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num)
        q -= 1;
    return q;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
    {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos)
    {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        Integer d{std::string(den)};
        if (d == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        value = Rational(Integer{std::string(num)}, d);
    }
    else if (auto dot = s.find('.'); dot != std::string_view::npos)
    {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole))
            || (!frac.empty() && !all_digits(frac)))
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
        Integer f = frac.empty() ? Integer(0) : Integer(std::string(frac));
        value = Rational(w * scale + f, scale);
    }
    else
    {
        if (!all_digits(s))
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        value = Rational(Integer(std::string(s)));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value)
{
    auto den = boost::multiprecision::denominator(value);
    auto num = boost::multiprecision::numerator(value);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

Rational simplest_between(const Rational& lo_in, const Rational& hi_in)
{
    Rational lo = lo_in;
    Rational hi = hi_in;
    if (lo > hi)
        std::swap(lo, hi);
    if (lo <= 0 && hi >= 0)
        return Rational(0);
    if (hi < 0)
        return Rational(-simplest_between(-hi, -lo));

    // Continued-fraction descent; 0 < lo <= hi from here on.
    Integer fl = floor_of(lo);
    if (Rational(fl) == lo)
        return lo;
    if (Rational(fl + 1) <= hi)
        return Rational(fl + 1);
    Rational inner = simplest_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
    return Rational(fl) + Rational(1) / inner;
}

Rational pow2_neg(unsigned k)
{
    Integer den = 1;
    den <<= k;
    return Rational(Integer(1), den);
}

}  // namespace cohere
