#include "cohere/polynomial.hpp"

#include <algorithm>
#include <vector>

#include "cohere/errors.hpp"

namespace cohere {

Polynomial::Polynomial(const Rational& constant)
{
    add_term({}, constant);
}

Polynomial Polynomial::variable(const Symbol& s)
{
    Polynomial p;
    p.add_term({{s, 1u}}, Rational(1));
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted)
    {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    for (const auto& [m, c] : other.terms_)
        add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
    for (const auto& [m, c] : other.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other)
{
    Polynomial product;
    for (const auto& [ma, ca] : terms_)
    {
        for (const auto& [mb, cb] : other.terms_)
        {
            Monomial m = ma;
            for (const auto& [s, e] : mb)
                m[s] += e;
            product.add_term(m, ca * cb);
        }
    }
    *this = std::move(product);
    return *this;
}

namespace {

Rational power(const Rational& base, unsigned exponent)
{
    Rational r(1);
    for (unsigned i = 0; i < exponent; ++i)
        r *= base;
    return r;
}

}  // namespace

Rational Polynomial::evaluate(const Valuation& valuation) const
{
    Rational total(0);
    for (const auto& [m, c] : terms_)
    {
        Rational t = c;
        for (const auto& [s, e] : m)
        {
            auto it = valuation.find(s);
            if (it == valuation.end())
                throw MissingSymbol("no value for prevision symbol '" + s.name() + "'");
            t *= power(it->second, e);
        }
        total += t;
    }
    return total;
}

Polynomial Polynomial::substitute(const Valuation& valuation) const
{
    Polynomial out;
    for (const auto& [m, c] : terms_)
    {
        Monomial rest;
        Rational t = c;
        for (const auto& [s, e] : m)
        {
            if (auto it = valuation.find(s); it != valuation.end())
                t *= power(it->second, e);
            else
                rest.emplace(s, e);
        }
        out.add_term(rest, t);
    }
    return out;
}

std::set<Symbol> Polynomial::symbols() const
{
    std::set<Symbol> out;
    for (const auto& [m, c] : terms_)
    {
        for (const auto& [s, e] : m)
            out.insert(s);
    }
    return out;
}

unsigned Polynomial::degree_in(const Symbol& s) const
{
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
    {
        if (auto it = m.find(s); it != m.end())
            d = std::max(d, it->second);
    }
    return d;
}

unsigned Polynomial::total_degree() const
{
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
    {
        unsigned t = 0;
        for (const auto& [s, e] : m)
            t += e;
        d = std::max(d, t);
    }
    return d;
}

std::optional<Rational> Polynomial::constant_value() const
{
    if (terms_.empty())
        return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first.empty())
        return terms_.begin()->second;
    return std::nullopt;
}

std::optional<std::pair<Rational, Rational>> Polynomial::as_affine_in(const Symbol& s) const
{
    Rational slope(0);
    Rational offset(0);
    for (const auto& [m, c] : terms_)
    {
        if (m.empty())
            offset = c;
        else if (m.size() == 1 && m.begin()->first == s && m.begin()->second == 1)
            slope = c;
        else
            return std::nullopt;
    }
    return std::make_pair(slope, offset);
}

std::string Polynomial::to_string() const
{
    if (terms_.empty())
        return "0";

    // Constant first, then by total degree, then by symbol order.
    std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
    auto degree = [](const Monomial& m) {
        unsigned d = 0;
        for (const auto& [s, e] : m)
            d += e;
        return d;
    };
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](const auto& a, const auto& b) { return degree(a.first) < degree(b.first); });

    std::string out;
    for (const auto& [m, c] : ordered)
    {
        Rational magnitude = c < 0 ? Rational(-c) : c;
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        std::string factors;
        for (const auto& [s, e] : m)
        {
            if (!factors.empty())
                factors += "*";
            factors += s.name();
            if (e > 1)
                factors += "^" + std::to_string(e);
        }
        if (factors.empty())
            out += cohere::to_string(magnitude);
        else if (magnitude == 1)
            out += factors;
        else
            out += cohere::to_string(magnitude) + "*" + factors;
    }
    return out;
}

}  // namespace cohere
