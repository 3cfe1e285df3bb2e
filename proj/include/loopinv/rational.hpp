#pragma once

// Exact rational and integer scalars. Everything downstream (polynomials,
// number fields, matrices, ideals) is built on these; no floating point
// enters any result path.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopinv {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q", and a leading sign; used by all text front ends.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Int n(s);
            return Rational(n);
        }
        Int n(s.substr(0, slash));
        Int d(s.substr(slash + 1));
        return make_rational(n, d);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational literal: " + s);
    }
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Int numerator(const Rational& q) { return q.get_num(); }
inline Int denominator(const Rational& q) { return q.get_den(); }

inline Rational rat_pow(const Rational& base, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return r;
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// ceil(log2(|n|)) for n != 0; 0 for n in {-1,0,1}.
inline long ceil_log2_abs(const Int& n) {
    Int a = abs(n);
    if (a <= 1) return 0;
    size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);  // floor(log2 a) + 1
    Int pw = int_pow(2, static_cast<unsigned long>(bits - 1));
    return (pw == a) ? static_cast<long>(bits - 1) : static_cast<long>(bits);
}

inline bool fits_slong(const Int& n) { return n.fits_slong_p(); }

// Euler totient by trial division; arguments here stay tiny.
inline unsigned long euler_phi(unsigned long n) {
    unsigned long result = n;
    unsigned long m = n;
    for (unsigned long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

}  // namespace loopinv
