#pragma once

// Modular (CRT) kernels for the operations where exact rational Euclid
// suffers from coefficient blowup: univariate gcd, resultants, and root
// extraction of polynomials over a number field. Every reconstructed result
// is verified exactly before it is returned.

#include <loopinv/unipoly.hpp>
#include <loopinv/zppoly.hpp>

#include <mutex>
#include <optional>

namespace loopinv {

namespace detail {

// rational reconstruction: v mod M -> n/d with |n|, d <= sqrt(M/2)
inline std::optional<Rational> rational_reconstruct(const Int& v_in, const Int& M) {
    Int v = v_in % M;
    if (v < 0) v += M;
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(M / 2).get_mpz_t());
    Int r0 = M, r1 = v;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        Int t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    if (t1 < 0) {
        t1 = -t1;
        r1 = -r1;
    }
    if (t1 > bound || int_gcd(abs(r1), t1) != 1) return std::nullopt;
    return make_rational(r1, t1);
}

inline uint64_t mod_of_rational(const Rational& x, uint64_t p) {
    Int num = numerator(x) % static_cast<long>(p);
    Int den = denominator(x) % static_cast<long>(p);
    if (den == 0) throw std::overflow_error("prime divides denominator");
    if (num < 0) num += static_cast<long>(p);
    uint64_t n = num.get_ui() % p;
    uint64_t d = den.get_ui() % p;
    return mulmod_u64(n, zp::inv(d, p), p);
}

inline zp::Poly poly_mod(const UniPoly& f, uint64_t p) {
    zp::Poly r(f.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = mod_of_rational(f.coeffs()[i], p);
    zp::trim(r);
    return r;
}

// deterministic prime stream for CRT loops, backed by a shared table so the
// primality tests run once per process
inline uint64_t shared_prime(size_t idx) {
    static std::vector<uint64_t> table;
    static std::mt19937_64 rng(0x9d2c5680dd1f37ULL);
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= idx) table.push_back(random_prime(rng, 59));
    return table[idx];
}

struct PrimeStream {
    size_t idx = 0;
    explicit PrimeStream(uint64_t salt) { (void)salt; }
    uint64_t next() { return shared_prime(idx++); }
};

}  // namespace detail

// gcd of rational polynomials by modular images; result is monic. Verified
// by exact division, with more primes added until verification passes.
inline UniPoly rational_poly_gcd(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    detail::PrimeStream ps(0xacdcULL);
    long best_deg = std::min(a.degree(), b.degree()) + 1;
    std::vector<Int> acc;  // CRT accumulators for monic gcd coefficients
    Int modulus = 1;
    for (int iter = 0; iter < 512; ++iter) {
        uint64_t p = ps.next();
        zp::Poly ap, bp;
        try {
            ap = detail::poly_mod(a, p);
            bp = detail::poly_mod(b, p);
        } catch (const std::overflow_error&) {
            continue;
        }
        if (zp::deg(ap) != a.degree() || zp::deg(bp) != b.degree()) continue;
        zp::Poly g = zp::gcd(ap, bp, p);
        long dg = zp::deg(g);
        if (dg > best_deg) continue;  // bad prime
        if (dg < best_deg) {          // all previous primes were bad
            best_deg = dg;
            acc.assign(dg + 1, Int(0));
            modulus = 1;
        }
        if (dg == 0) return UniPoly::constant(Rational(1));
        // CRT combine
        Int pz(static_cast<unsigned long>(p));
        if (modulus == 1) {
            for (long i = 0; i <= dg; ++i) acc[i] = Int(static_cast<unsigned long>(g[i]));
            modulus = pz;
        } else {
            Int inv;
            mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
            for (long i = 0; i <= dg; ++i) {
                Int cur = acc[i] % pz;
                if (cur < 0) cur += pz;
                Int delta = (Int(static_cast<unsigned long>(g[i])) - cur) * inv % pz;
                if (delta < 0) delta += pz;
                acc[i] += modulus * delta;
            }
            modulus *= pz;
        }
        // attempt rational reconstruction + exact verification
        std::vector<Rational> cand(dg + 1);
        bool ok = true;
        for (long i = 0; i <= dg && ok; ++i) {
            auto rc = detail::rational_reconstruct(acc[i], modulus);
            if (!rc) ok = false;
            else cand[i] = *rc;
        }
        if (!ok) continue;
        UniPoly gq(cand);
        if (gq.degree() != best_deg) continue;
        if ((a % gq).is_zero() && (b % gq).is_zero()) return gq.monic();
    }
    throw std::runtime_error("modular gcd did not stabilize");
}

// Resultant via CRT up to a Hadamard-style bound; inputs are scaled to
// integer coefficients first.
inline Rational modular_resultant(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return Rational(0);
    if (a.degree() == 0) return rat_pow(a.leading(), static_cast<unsigned long>(b.degree()));
    if (b.degree() == 0) return rat_pow(b.leading(), static_cast<unsigned long>(a.degree()));
    Int da = a.common_denominator(), db = b.common_denominator();
    std::vector<Int> az(a.degree() + 1), bz(b.degree() + 1);
    for (long i = 0; i <= a.degree(); ++i) az[i] = numerator(a[i] * Rational(da));
    for (long i = 0; i <= b.degree(); ++i) bz[i] = numerator(b[i] * Rational(db));

    // Hadamard bound on the Sylvester determinant: product of row 2-norms
    auto row_bound = [](const std::vector<Int>& c) {
        Int s(0);
        for (const auto& v : c) s += v * v;
        Int r;
        mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
        return r + 1;
    };
    Int bound(2);
    Int ra = row_bound(az), rb = row_bound(bz);
    for (long i = 0; i < b.degree(); ++i) bound *= ra;
    for (long i = 0; i < a.degree(); ++i) bound *= rb;
    bound *= 2;

    detail::PrimeStream ps(0xd0357ULL);
    Int acc(0), modulus(1);
    while (modulus < bound) {
        uint64_t p = ps.next();
        if (az.back() % static_cast<long>(p) == 0 || bz.back() % static_cast<long>(p) == 0) continue;
        auto tozp = [&](const std::vector<Int>& c) {
            zp::Poly r(c.size());
            for (size_t i = 0; i < c.size(); ++i) {
                Int v = c[i] % static_cast<long>(p);
                if (v < 0) v += static_cast<long>(p);
                r[i] = v.get_ui();
            }
            return r;
        };
        zp::Poly ap = tozp(az), bp = tozp(bz);
        // euclidean resultant over Z/p
        uint64_t res = 1;
        bool negate = false;
        bool zero = false;
        while (true) {
            if (zp::deg(bp) == 0) {
                res = mulmod_u64(res, powmod_u64(bp[0], zp::deg(ap), p), p);
                break;
            }
            if (zp::deg(ap) < zp::deg(bp)) {
                if ((zp::deg(ap) % 2) && (zp::deg(bp) % 2)) negate = !negate;
                std::swap(ap, bp);
                continue;
            }
            zp::Poly r = zp::mod(ap, bp, p);
            if (r.empty()) {
                zero = true;
                break;
            }
            res = mulmod_u64(res, powmod_u64(bp.back(), zp::deg(ap) - zp::deg(r), p), p);
            if ((zp::deg(ap) % 2) && (zp::deg(bp) % 2)) negate = !negate;
            ap = std::move(bp);
            bp = std::move(r);
        }
        uint64_t v = zero ? 0 : (negate ? p - res : res);
        Int pz(static_cast<unsigned long>(p));
        if (modulus == 1) {
            acc = Int(static_cast<unsigned long>(v));
            modulus = pz;
        } else {
            Int inv;
            mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
            Int cur = acc % pz;
            if (cur < 0) cur += pz;
            Int delta = (Int(static_cast<unsigned long>(v)) - cur) * inv % pz;
            if (delta < 0) delta += pz;
            acc += modulus * delta;
        }
    }
    if (2 * acc > modulus) acc -= modulus;
    // undo scaling: res(a*da, b*db) = da^deg(b) * db^deg(a) * res(a, b)
    Rational scale = rat_pow(Rational(da), static_cast<unsigned long>(b.degree())) *
                     rat_pow(Rational(db), static_cast<unsigned long>(a.degree()));
    return Rational(acc) / scale;
}

}  // namespace loopinv
