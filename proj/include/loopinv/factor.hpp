#pragma once

// Rational univariate factorization: Yun squarefree decomposition, then
// Zassenhaus on each squarefree part (factor mod p, multifactor quadratic
// Hensel lifting, subset recombination). A rational-root pre-strip peels
// linear factors cheaply before the modular machinery runs.

#include <loopinv/modpoly.hpp>

#include <map>
#include <random>

namespace loopinv {



namespace detail {

// ---- integer polynomials mod m (m = p^k), for Hensel lifting ----

using ZPoly = std::vector<Int>;

inline void ztrim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long zdeg(const ZPoly& f) { return static_cast<long>(f.size()) - 1; }

inline ZPoly zreduce(ZPoly f, const Int& m) {
    for (auto& c : f) {
        c %= m;
        if (c < 0) c += m;
    }
    ztrim(f);
    return f;
}

inline ZPoly zmul(const ZPoly& a, const ZPoly& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return zreduce(std::move(r), m);
}

inline ZPoly zadd(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return zreduce(std::move(r), m);
}

inline ZPoly zsub(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return zreduce(std::move(r), m);
}

// Division by a monic divisor mod m.
inline void zdivmod_monic(const ZPoly& f, const ZPoly& g, ZPoly& q, ZPoly& r, const Int& m) {
    r = f;
    q.assign(f.size() > g.size() ? f.size() - g.size() + 1 : 1, Int(0));
    for (long i = zdeg(r); i >= zdeg(g); --i) {
        Int c = r[i];
        if (c == 0) continue;
        q[i - zdeg(g)] = c;
        for (size_t j = 0; j < g.size(); ++j) {
            size_t k = i - zdeg(g) + j;
            r[k] -= c * g[j];
            r[k] %= m;
        }
    }
    q = zreduce(std::move(q), m);
    r = zreduce(std::move(r), m);
}

struct HenselPair {
    ZPoly g, h, s, t;  // f = g*h, s*g + t*h = 1 (mod modulus)
};

// One quadratic Hensel step: modulus m -> m^2. h stays monic.
inline HenselPair hensel_step(const ZPoly& f, const HenselPair& in, const Int& m) {
    Int m2 = m * m;
    ZPoly e = zsub(zreduce(f, m2), zmul(in.g, in.h, m2), m2);
    ZPoly q, r;
    zdivmod_monic(zmul(in.s, e, m2), in.h, q, r, m2);
    ZPoly gstar = zadd(zadd(in.g, zmul(in.t, e, m2), m2), zmul(q, in.g, m2), m2);
    ZPoly hstar = zadd(in.h, r, m2);
    ZPoly b = zsub(zadd(zmul(in.s, gstar, m2), zmul(in.t, hstar, m2), m2), ZPoly{Int(1)}, m2);
    ZPoly c, d;
    zdivmod_monic(zmul(in.s, b, m2), hstar, c, d, m2);
    ZPoly sstar = zsub(in.s, d, m2);
    ZPoly tstar = zsub(zsub(in.t, zmul(in.t, b, m2), m2), zmul(c, gstar, m2), m2);
    return {gstar, hstar, sstar, tstar};
}

inline ZPoly from_zp(const zp::Poly& f) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = Int(static_cast<unsigned long>(f[i]));
    return r;
}

inline zp::Poly to_zp(const ZPoly& f, uint64_t p) {
    zp::Poly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        Int c = f[i] % static_cast<unsigned long>(p);
        if (c < 0) c += static_cast<unsigned long>(p);
        r[i] = c.get_ui();
    }
    zp::trim(r);
    return r;
}

// Lift the monic factorization f = prod(factors) from mod p to mod p^(2^j) >= bound.
inline std::vector<ZPoly> hensel_lift_tree(const ZPoly& f, const std::vector<zp::Poly>& factors,
                                           uint64_t p, const Int& bound, Int& modulus_out) {
    Int m(static_cast<unsigned long>(p));
    int steps = 0;
    while (m < bound) {
        m *= m;
        ++steps;
    }
    // recursive split-and-lift
    struct Rec {
        uint64_t p;
        int steps;
        std::vector<ZPoly> leaves;
        void run(const ZPoly& fcur, const std::vector<zp::Poly>& fs, size_t lo, size_t hi) {
            if (hi - lo == 1) {
                leaves.push_back(fcur);
                return;
            }
            size_t mid = lo + (hi - lo) / 2;
            zp::Poly g0{1}, h0{1};
            for (size_t i = lo; i < mid; ++i) g0 = zp::mul(g0, fs[i], p);
            for (size_t i = mid; i < hi; ++i) h0 = zp::mul(h0, fs[i], p);
            zp::Poly g1, s, t;
            zp::xgcd(g0, h0, g1, s, t, p);
            HenselPair pair{from_zp(g0), from_zp(h0), from_zp(s), from_zp(t)};
            Int m(static_cast<unsigned long>(p));
            for (int i = 0; i < steps; ++i) {
                pair = hensel_step(fcur, pair, m);
                m *= m;
            }
            run(pair.g, fs, lo, mid);
            run(pair.h, fs, mid, hi);
        }
    } rec{p, steps, {}};
    rec.run(zreduce(f, m), factors, 0, factors.size());
    modulus_out = m;
    return rec.leaves;
}

inline Int balanced(const Int& c, const Int& m) {
    Int r = c % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

// Zassenhaus recombination over the integers; f primitive squarefree with
// positive leading coefficient. Returns primitive irreducible factors.
inline std::vector<std::vector<Int>> zassenhaus(const std::vector<Int>& f) {
    ZPoly F(f.begin(), f.end());
    long n = zdeg(F);
    if (n <= 1) return {F};

    // prime selection: p odd, p does not divide lc, f squarefree mod p;
    // among several valid primes keep the one with the fewest modular
    // factors (smaller recombination search)
    uint64_t p = 0;
    std::vector<zp::Poly> modular;
    std::mt19937_64 rng(0xfac70bULL);
    int good = 0;
    for (int tries = 0; tries < 400 && good < 4; ++tries) {
        uint64_t cand = random_prime(rng, 24);
        Int lcm = F.back() % static_cast<unsigned long>(cand);
        if (lcm == 0) continue;
        zp::Poly fp = to_zp(F, cand);
        if (zp::deg(fp) != n) continue;
        zp::Poly g = zp::gcd(fp, zp::derivative(fp, cand), cand);
        if (zp::deg(g) != 0) continue;
        ++good;
        auto fac = zp::factor_squarefree(zp::monic(std::move(fp), cand), cand);
        if (modular.empty() || fac.size() < modular.size()) {
            p = cand;
            modular = std::move(fac);
        }
        if (modular.size() == 1) break;
    }
    if (p == 0) throw std::runtime_error("factor: no suitable prime found");
    if (modular.size() == 1) return {F};

    // Mignotte-style coefficient bound for factors of F times lc(F).
    Int norm2(0);
    for (const auto& c : F) norm2 += c * c;
    Int norm = sqrt(norm2) + 1;
    Int bound = (norm + abs(F.back())) * abs(F.back());
    bound <<= static_cast<unsigned long>(n + 1);
    bound *= 2;

    Int modulus;
    // lift the monic factorization of monic(F) mod p
    std::vector<ZPoly> lifted;
    {
        // make F monic mod p^k by multiplying with inverse of lc
        Int m(static_cast<unsigned long>(p));
        while (m < bound) m *= m;
        Int lcinv;
        mpz_invert(lcinv.get_mpz_t(), F.back().get_mpz_t(), m.get_mpz_t());
        ZPoly Fm = F;
        for (auto& c : Fm) c = c * lcinv % m;
        Fm = zreduce(std::move(Fm), m);
        lifted = hensel_lift_tree(Fm, modular, p, bound, modulus);
    }

    std::vector<ZPoly> pool = lifted;
    std::vector<ZPoly> result;
    ZPoly rem = F;

    auto try_subset = [&](const std::vector<size_t>& idx) -> bool {
        // cheap pretest: the balanced constant term of lc*prod must divide
        // lc(rem)*rem(0)
        if (rem.front() != 0) {
            Int c0 = rem.back();
            for (size_t i : idx) c0 = c0 * pool[i].front() % modulus;
            c0 = balanced(c0, modulus);
            if (c0 == 0 || (rem.back() * rem.front()) % c0 != 0) return false;
        }
        ZPoly prod{rem.back()};  // lc(rem)
        for (size_t i : idx) prod = zmul(prod, pool[i], modulus);
        for (auto& c : prod) c = balanced(c, modulus);
        ztrim(prod);
        if (prod.empty()) return false;
        // primitive part
        Int cont(0);
        for (const auto& c : prod) cont = int_gcd(cont, c);
        if (prod.back() < 0) cont = -cont;
        for (auto& c : prod) c /= cont;
        // trial division of rem by prod over Z
        UniPoly R(std::vector<Rational>(rem.begin(), rem.end()));
        UniPoly Pr(std::vector<Rational>(prod.begin(), prod.end()));
        auto [q, r] = R.divmod(Pr);
        if (!r.is_zero()) return false;
        // quotient must be integral; over Z it is since prod is primitive (Gauss)
        result.push_back(prod);
        ZPoly newrem(q.coeffs().size());
        for (size_t i = 0; i < newrem.size(); ++i) {
            assert(denominator(q.coeffs()[i]) == 1);
            newrem[i] = numerator(q.coeffs()[i]);
        }
        rem = std::move(newrem);
        std::vector<ZPoly> np;
        for (size_t i = 0; i < pool.size(); ++i)
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) np.push_back(pool[i]);
        pool = std::move(np);
        return true;
    };

    size_t card = 1;
    while (pool.size() > 0 && 2 * card <= pool.size()) {
        // iterate subsets of size card (pool is small at desk scale)
        std::vector<size_t> idx(card);
        for (size_t i = 0; i < card; ++i) idx[i] = i;
        bool advanced = false;
        while (true) {
            if (try_subset(idx)) {
                advanced = true;
                break;  // pool changed; restart this cardinality
            }
            // next combination
            long i = static_cast<long>(card) - 1;
            while (i >= 0 && idx[i] == pool.size() - card + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (size_t j = i + 1; j < card; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!advanced) ++card;
    }
    if (zdeg(rem) > 0) result.push_back(rem);
    return result;
}

}  // namespace detail

// Irreducible monic factors with multiplicities; the product of
// factor^multiplicity equals the input up to a rational constant.
inline std::vector<std::pair<UniPoly, int>> factor_rational_poly(const UniPoly& f) {
    if (f.is_zero()) throw std::domain_error("factor of zero polynomial");
    std::vector<std::pair<UniPoly, int>> out;
    if (f.degree() == 0) return out;

    // Yun squarefree decomposition (gcds via modular images; see modpoly.hpp)
    std::vector<std::pair<UniPoly, int>> squarefree;
    {
        UniPoly fm = f.monic();
        UniPoly df = fm.derivative();
        UniPoly a = rational_poly_gcd(fm, df);
        UniPoly b = fm / a;
        UniPoly c = df / a - b.derivative();
        int i = 1;
        while (b.degree() > 0) {
            UniPoly d = rational_poly_gcd(b, c);
            if (d.degree() > 0) squarefree.emplace_back(d, i);
            b = b / d;
            c = c / d - b.derivative();
            ++i;
        }
    }

    for (auto& [sf, mult] : squarefree) {
        UniPoly g = sf;
        // rational-root pre-strip (skipped when divisor enumeration would be slow)
        {
            auto zc = g.primitive_integer_coeffs();
            const Int kPreStripCap = int_pow(10, 12);
            while (g.degree() >= 1) {
                bool found = false;
                Int a0 = zc.front(), an = zc.back();
                if (abs(a0) > kPreStripCap || abs(an) > kPreStripCap) break;
                if (a0 == 0) {
                    out.emplace_back(UniPoly::x(), mult);
                    g = g / UniPoly::x();
                    zc = g.primitive_integer_coeffs();
                    continue;
                }
                std::vector<Int> ps, qs;
                for (Int d(1); d * d <= abs(a0); ++d)
                    if (a0 % d == 0) {
                        ps.push_back(d);
                        ps.push_back(abs(a0) / d);
                    }
                for (Int d(1); d * d <= abs(an); ++d)
                    if (an % d == 0) {
                        qs.push_back(d);
                        qs.push_back(abs(an) / d);
                    }
                for (const Int& pn : ps) {
                    for (const Int& qd : qs) {
                        if (int_gcd(pn, qd) != 1) continue;
                        for (int sgn : {1, -1}) {
                            Rational root = make_rational(sgn * pn, qd);
                            if (g.eval(root) == 0) {
                                UniPoly lin = UniPoly::linear(Rational(1), -root);
                                out.emplace_back(lin, mult);
                                g = g / lin;
                                zc = g.primitive_integer_coeffs();
                                found = true;
                                break;
                            }
                        }
                        if (found) break;
                    }
                    if (found) break;
                }
                if (!found) break;
            }
        }
        if (g.degree() <= 0) continue;
        if (g.degree() == 1) {
            out.emplace_back(g.monic(), mult);
            continue;
        }
        auto zc = g.primitive_integer_coeffs();
        for (auto& fac : detail::zassenhaus(zc)) {
            std::vector<Rational> qc(fac.size());
            for (size_t i = 0; i < fac.size(); ++i) qc[i] = Rational(fac[i]);
            out.emplace_back(UniPoly(std::move(qc)).monic(), mult);
        }
    }

    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        const auto& ca = a.first.coeffs();
        const auto& cb = b.first.coeffs();
        for (size_t i = 0; i < ca.size(); ++i)
            if (ca[i] != cb[i]) return ca[i] < cb[i];
        return a.second < b.second;
    });
    // merge equal factors (can arise when pre-strip finds repeated linears across parts)
    std::vector<std::pair<UniPoly, int>> merged;
    for (auto& fm : out) {
        if (!merged.empty() && merged.back().first == fm.first) merged.back().second += fm.second;
        else merged.push_back(fm);
    }
    return merged;
}

}  // namespace loopinv
