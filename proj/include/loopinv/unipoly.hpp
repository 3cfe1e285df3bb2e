#pragma once

// Dense univariate polynomials over the rationals, coefficients stored
// lowest degree first. The zero polynomial has an empty coefficient vector
// and degree -1.

#include <loopinv/rational.hpp>

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>

namespace loopinv {

class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const Rational& a) { return UniPoly({a}); }
    static UniPoly x() { return UniPoly({Rational(0), Rational(1)}); }
    // a*x + b
    static UniPoly linear(const Rational& a, const Rational& b) { return UniPoly({b, a}); }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& operator[](size_t i) const {
        static const Rational kZero(0);
        return i < c_.size() ? c_[i] : kZero;
    }
    const Rational& leading() const {
        assert(!c_.empty());
        return c_.back();
    }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UniPoly& o) const { return !(*this == o); }

    UniPoly operator-() const {
        std::vector<Rational> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
        return UniPoly(std::move(r));
    }

    UniPoly operator+(const UniPoly& o) const {
        std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return UniPoly(std::move(r));
    }
    UniPoly operator-(const UniPoly& o) const { return *this + (-o); }

    UniPoly operator*(const UniPoly& o) const {
        if (is_zero() || o.is_zero()) return UniPoly();
        std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return UniPoly(std::move(r));
    }

    UniPoly operator*(const Rational& s) const {
        if (s == 0) return UniPoly();
        std::vector<Rational> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] * s;
        return UniPoly(std::move(r));
    }

    // Quotient and remainder; the divisor must be nonzero.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        std::vector<Rational> rem = c_;
        long dd = d.degree();
        long rd = degree();
        if (rd < dd) return {UniPoly(), *this};
        std::vector<Rational> quot(rd - dd + 1, Rational(0));
        for (long i = rd; i >= dd; --i) {
            Rational q = rem[i] / d.c_[dd];
            if (q == 0) continue;
            quot[i - dd] = q;
            for (long j = 0; j <= dd; ++j) rem[i - dd + j] -= q * d.c_[j];
        }
        return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
    }
    UniPoly operator/(const UniPoly& d) const { return divmod(d).first; }
    UniPoly operator%(const UniPoly& d) const { return divmod(d).second; }

    bool divides(const UniPoly& f) const { return f.divmod(*this).second.is_zero(); }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return *this * (Rational(1) / leading());
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<Rational> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rational(static_cast<long>(i));
        return UniPoly(std::move(r));
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // f(a*x + b)
    UniPoly compose_linear(const Rational& a, const Rational& b) const {
        UniPoly acc;
        UniPoly lin = UniPoly::linear(a, b);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * lin + UniPoly::constant(c_[i]);
        return acc;
    }

    // x^k * f
    UniPoly shift_up(size_t k) const {
        if (is_zero()) return *this;
        std::vector<Rational> r(c_.size() + k, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return UniPoly(std::move(r));
    }

    // Smallest positive integer D with D*f integral, and the integer images.
    Int common_denominator() const {
        Int d(1);
        for (const auto& q : c_) d = int_lcm(d, denominator(q));
        return d;
    }

    // Primitive integer form: f == (sign * content) * primitive, primitive has
    // integer coprime coefficients and positive leading coefficient.
    std::vector<Int> primitive_integer_coeffs() const {
        assert(!is_zero());
        Int den = common_denominator();
        std::vector<Int> z(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) z[i] = numerator(c_[i] * Rational(den));
        Int g(0);
        for (const auto& v : z) g = int_gcd(g, v);
        if (g == 0) g = 1;
        if (z.back() < 0) g = -g;
        for (auto& v : z) v /= g;
        return z;
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            Rational a = c_[i];
            if (!first) os << (a > 0 ? " + " : " - ");
            else if (a < 0) os << "-";
            Rational mag = abs(a);
            first = false;
            if (i == 0) {
                os << mag.get_str();
                continue;
            }
            if (mag != 1) os << mag.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

  private:
    std::vector<Rational> c_;
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

inline std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.str(); }

inline UniPoly poly_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// g = gcd(a,b) together with s,t such that s*a + t*b = g.
inline std::tuple<UniPoly, UniPoly, UniPoly> poly_xgcd(const UniPoly& a, const UniPoly& b) {
    UniPoly r0 = a, r1 = b;
    UniPoly s0 = UniPoly::constant(Rational(1)), s1;
    UniPoly t0, t1 = UniPoly::constant(Rational(1));
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        UniPoly s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        UniPoly t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Rational lc = r0.leading();
    Rational inv = Rational(1) / lc;
    return {r0 * inv, s0 * inv, t0 * inv};
}

inline UniPoly squarefree_part(const UniPoly& f) {
    assert(!f.is_zero());
    if (f.degree() == 0) return UniPoly::constant(Rational(1));
    UniPoly g = poly_gcd(f, f.derivative());
    return (f / g).monic();
}

// Resultant of two rational polynomials via the Euclidean scheme.
inline Rational resultant(UniPoly a, UniPoly b) {
    if (a.is_zero() || b.is_zero()) return Rational(0);
    Rational res(1);
    bool negate = false;
    while (true) {
        if (b.degree() == 0) {
            res *= rat_pow(b.leading(), static_cast<unsigned long>(a.degree()));
            break;
        }
        if (a.degree() < b.degree()) {
            if ((a.degree() % 2) && (b.degree() % 2)) negate = !negate;
            std::swap(a, b);
            continue;
        }
        UniPoly r = a % b;
        if (r.is_zero()) return Rational(0);
        res *= rat_pow(b.leading(), static_cast<unsigned long>(a.degree() - r.degree()));
        if ((a.degree() % 2) && (b.degree() % 2)) negate = !negate;
        a = std::move(b);
        b = std::move(r);
    }
    return negate ? -res : res;
}

}  // namespace loopinv
