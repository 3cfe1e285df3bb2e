#pragma once

// Dense polynomials over Z/p for word-size primes: the kernel shared by the
// factorizer and the modular (CRT) fast paths.

#include <loopinv/primes.hpp>
#include <loopinv/rational.hpp>

#include <vector>

namespace loopinv {

namespace zp {

// Dense polynomials over Z/p, lowest degree first, normalized (no top zeros).
using Poly = std::vector<uint64_t>;

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long deg(const Poly& f) { return static_cast<long>(f.size()) - 1; }

inline Poly mul(const Poly& a, const Poly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    trim(r);
    return r;
}

inline uint64_t inv(uint64_t a, uint64_t p) { return powmod_u64(a, p - 2, p); }

inline void divmod(const Poly& f, const Poly& g, Poly& q, Poly& r, uint64_t p) {
    r = f;
    q.assign(f.size() > g.size() ? f.size() - g.size() + 1 : 1, 0);
    uint64_t lg = inv(g.back(), p);
    for (long i = deg(r); i >= deg(g); --i) {
        uint64_t c = mulmod_u64(r[i], lg, p);
        if (c == 0) continue;
        q[i - deg(g)] = c;
        for (size_t j = 0; j < g.size(); ++j) {
            uint64_t sub = mulmod_u64(c, g[j], p);
            size_t k = i - deg(g) + j;
            r[k] = (r[k] + p - sub) % p;
        }
    }
    trim(q);
    trim(r);
}

inline Poly mod(const Poly& f, const Poly& g, uint64_t p) {
    Poly q, r;
    divmod(f, g, q, r, p);
    return r;
}

inline Poly monic(Poly f, uint64_t p) {
    if (f.empty()) return f;
    uint64_t il = inv(f.back(), p);
    for (auto& c : f) c = mulmod_u64(c, il, p);
    return f;
}

inline Poly gcd(Poly a, Poly b, uint64_t p) {
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a), p);
}

inline Poly sub(const Poly& a, const Poly& b, uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    trim(r);
    return r;
}

// monic g = gcd(a,b) with s*a + t*b = g
inline void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& s, Poly& t, uint64_t p) {
    Poly r0 = a, r1 = b;
    Poly s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        Poly q, r;
        divmod(r0, r1, q, r, p);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = sub(s0, mul(q, s1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        Poly t2 = sub(t0, mul(q, t1, p), p);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    uint64_t il = inv(r0.back(), p);
    for (auto& c : r0) c = mulmod_u64(c, il, p);
    for (auto& c : s0) c = mulmod_u64(c, il, p);
    for (auto& c : t0) c = mulmod_u64(c, il, p);
    g = std::move(r0);
    s = std::move(s0);
    t = std::move(t0);
}

inline Poly derivative(const Poly& f, uint64_t p) {
    if (f.size() <= 1) return {};
    Poly r(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = mulmod_u64(f[i], i % p, p);
    trim(r);
    return r;
}

inline Poly powmod(const Poly& base, const Int& e, const Poly& f, uint64_t p) {
    Poly r{1};
    Poly b = mod(base, f, p);
    long bits = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2));
    for (long i = bits - 1; i >= 0; --i) {
        r = mod(mul(r, r, p), f, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, b, p), f, p);
    }
    return r;
}

// Distinct-degree then equal-degree (Cantor-Zassenhaus) splitting of a
// squarefree monic polynomial mod an odd prime. Deterministically seeded.
inline std::vector<Poly> factor_squarefree(const Poly& f, uint64_t p) {
    std::vector<Poly> out;
    std::vector<std::pair<Poly, long>> stages;  // (product of irreducibles, common degree)
    Poly rem = f;
    Poly h{0, 1};  // x
    long d = 0;
    while (deg(rem) > 0) {
        ++d;
        if (2 * d > deg(rem)) {
            stages.emplace_back(rem, deg(rem));
            break;
        }
        h = powmod(h, Int(static_cast<unsigned long>(p)), rem, p);
        Poly g = gcd(sub(h, Poly{0, 1}, p), rem, p);
        if (deg(g) > 0) {
            stages.emplace_back(g, d);
            Poly q, r;
            divmod(rem, g, q, r, p);
            rem = std::move(q);
            h = mod(h, rem, p);
        }
    }
    std::mt19937_64 rng(0x5eedf00dULL ^ p);
    Int pe(static_cast<unsigned long>(p));
    for (auto& [prod, dd] : stages) {
        std::vector<Poly> work{prod};
        Int exp = (int_pow(pe, static_cast<unsigned long>(dd)) - 1) / 2;
        while (!work.empty()) {
            Poly cur = work.back();
            work.pop_back();
            if (deg(cur) == dd) {
                out.push_back(monic(std::move(cur), p));
                continue;
            }
            Poly r(deg(cur), 0);
            for (auto& c : r) c = rng() % p;
            trim(r);
            if (r.empty()) continue;
            Poly t = powmod(r, exp, cur, p);
            if (!t.empty()) t[0] = (t[0] + p - 1) % p;
            trim(t);
            Poly g = gcd(t, cur, p);
            if (deg(g) <= 0 || deg(g) == deg(cur)) {
                work.push_back(std::move(cur));
                continue;
            }
            Poly q, rr;
            divmod(cur, g, q, rr, p);
            work.push_back(std::move(g));
            work.push_back(std::move(q));
        }
    }
    return out;
}

}  // namespace zp

}  // namespace loopinv
