#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "cohere/rational.hpp"

namespace cohere {

/// Name of a prevision (x, y, z, mu, ...). Strongly typed to keep it apart from atom names.
class Symbol
{
    public:
        Symbol() = default;
        explicit Symbol(std::string name) : name_(std::move(name)) {}

        const std::string& name() const { return name_; }

        auto operator<=>(const Symbol&) const = default;

    private:
        std::string name_;
};

using Valuation = std::map<Symbol, Rational>;

/// Symbol -> positive exponent.
using Monomial = std::map<Symbol, unsigned>;

/**
 * Multivariate polynomial over prevision symbols with exact rational
 * coefficients. Canonical: zero coefficients are never stored, so
 * structural equality is polynomial identity.
 */
class Polynomial
{
    public:
        Polynomial() = default;
        Polynomial(const Rational& constant);  // NOLINT: implicit by intent
        Polynomial(long constant) : Polynomial(Rational(constant)) {}  // NOLINT

        static Polynomial variable(const Symbol& s);

        Polynomial& operator+=(const Polynomial& other);
        Polynomial& operator-=(const Polynomial& other);
        Polynomial& operator*=(const Polynomial& other);

        friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
        friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
        friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
        friend Polynomial operator-(const Polynomial& a) { return Polynomial() - a; }

        friend bool operator==(const Polynomial&, const Polynomial&) = default;

        /// Throws MissingSymbol if any symbol is unassigned.
        Rational evaluate(const Valuation& valuation) const;
        /// Replaces the assigned symbols only.
        Polynomial substitute(const Valuation& valuation) const;

        std::set<Symbol> symbols() const;
        unsigned degree_in(const Symbol& s) const;
        unsigned total_degree() const;

        bool is_zero() const { return terms_.empty(); }
        std::optional<Rational> constant_value() const;
        /// (slope, offset) when the polynomial equals slope*s + offset, else nothing.
        std::optional<std::pair<Rational, Rational>> as_affine_in(const Symbol& s) const;

        const std::map<Monomial, Rational>& terms() const { return terms_; }

        /// e.g. "x + mu - mu*x"
        std::string to_string() const;

    private:
        void add_term(const Monomial& m, const Rational& c);

        std::map<Monomial, Rational> terms_;
};

}  // namespace cohere
