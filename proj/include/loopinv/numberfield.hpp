#pragma once

// Number fields Q[t]/(m) with a designated complex embedding, and exact
// arithmetic on their elements. Fields built by splitting_field() contain
// every root of every requested polynomial (they are normal), which is what
// conjugate enumeration relies on.

#include <loopinv/factor.hpp>
#include <loopinv/matrix.hpp>
#include <loopinv/roots.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace loopinv {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField {
  public:
    // minpoly must be monic irreducible; the box must isolate one of its roots.
    static FieldPtr create(UniPoly minpoly, BoxC theta_box) {
        return FieldPtr(new NumberField(std::move(minpoly), std::move(theta_box)));
    }

    static const FieldPtr& rationals() {
        static const FieldPtr q = create(UniPoly::x(), BoxC::point(Rational(0), Rational(0)));
        return q;
    }

    long degree() const { return min_poly_.degree(); }
    const UniPoly& min_poly() const { return min_poly_; }
    bool is_rational() const { return degree() == 1; }

    BoxC theta_box() const {
        std::lock_guard<std::mutex> lock(mu_);
        return box_;
    }

    // Shrink the cached isolating box below max_radius. Containment of the
    // designated root is preserved by every refinement step.
    BoxC refine_theta_box(const Rational& max_radius) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (is_rational()) return box_;
        int guard = 0;
        while (box_.radius() > max_radius) {
            auto r = krawczyk_refine(min_poly_, dmin_, box_, prec_);
            if (!r || !(r->radius() < box_.radius())) {
                prec_ *= 2;
                r = krawczyk_refine(min_poly_, dmin_, box_, prec_);
            }
            if (r && r->radius() < box_.radius()) box_ = *r;
            if (++guard > 256) throw std::runtime_error("field box refinement stalled");
        }
        return box_;
    }

  private:
    NumberField(UniPoly m, BoxC box)
        : min_poly_(std::move(m)), dmin_(min_poly_.derivative()), box_(std::move(box)) {
        assert(min_poly_.degree() >= 1);
        assert(min_poly_.leading() == 1);
        if (min_poly_.degree() == 1) box_ = BoxC::point(-min_poly_[0], Rational(0));
    }

    UniPoly min_poly_;
    UniPoly dmin_;
    mutable BoxC box_;
    mutable unsigned prec_ = 192;
    mutable std::mutex mu_;
};

class AlgebraicNumber {
  public:
    AlgebraicNumber() : field_(NumberField::rationals()), coords_{Rational(0)} {}
    /*implicit*/ AlgebraicNumber(const Rational& q)
        : field_(NumberField::rationals()), coords_{q} {}
    /*implicit*/ AlgebraicNumber(long v) : AlgebraicNumber(Rational(v)) {}
    AlgebraicNumber(FieldPtr f, std::vector<Rational> coords)
        : field_(std::move(f)), coords_(std::move(coords)) {
        coords_.resize(field_->degree(), Rational(0));
    }

    // The class of t, i.e. the field's primitive element.
    static AlgebraicNumber generator(const FieldPtr& f) {
        std::vector<Rational> c(f->degree(), Rational(0));
        if (f->degree() == 1) c[0] = -f->min_poly()[0];
        else c[1] = Rational(1);
        return AlgebraicNumber(f, std::move(c));
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<Rational>& coords() const { return coords_; }

    bool is_zero() const {
        for (const auto& c : coords_)
            if (c != 0) return false;
        return true;
    }
    bool is_one() const {
        if (coords_[0] != 1) return false;
        for (size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }
    bool is_rational_value() const {
        for (size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }
    Rational rational_value() const {
        assert(is_rational_value());
        return coords_[0];
    }

    UniPoly coords_poly() const { return UniPoly(coords_); }

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        auto [x, y] = promote(a, b);
        std::vector<Rational> c(x.coords_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = x.coords_[i] + y.coords_[i];
        return AlgebraicNumber(x.field_, std::move(c));
    }
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        auto [x, y] = promote(a, b);
        std::vector<Rational> c(x.coords_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = x.coords_[i] - y.coords_[i];
        return AlgebraicNumber(x.field_, std::move(c));
    }
    AlgebraicNumber operator-() const {
        std::vector<Rational> c(coords_.size());
        for (size_t i = 0; i < c.size(); ++i) c[i] = -coords_[i];
        return AlgebraicNumber(field_, std::move(c));
    }
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        auto [x, y] = promote(a, b);
        size_t n = x.coords_.size();
        std::vector<Rational> prod(2 * n - 1, Rational(0));
        for (size_t i = 0; i < n; ++i) {
            if (x.coords_[i] == 0) continue;
            for (size_t j = 0; j < n; ++j) prod[i + j] += x.coords_[i] * y.coords_[j];
        }
        reduce_mod(prod, x.field_->min_poly());
        prod.resize(n);
        return AlgebraicNumber(x.field_, std::move(prod));
    }

    AlgebraicNumber inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero algebraic number");
        if (field_->degree() == 1) return AlgebraicNumber(field_, {Rational(1) / coords_[0]});
        auto [g, s, t] = poly_xgcd(UniPoly(coords_), field_->min_poly());
        (void)t;
        assert(g.is_one());
        std::vector<Rational> c((s % field_->min_poly()).coeffs());
        c.resize(field_->degree(), Rational(0));
        return AlgebraicNumber(field_, std::move(c));
    }

    AlgebraicNumber pow(unsigned long e) const {
        AlgebraicNumber r(Rational(1)), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    // Integer exponents; negative powers require a nonzero value.
    AlgebraicNumber pow_int(long e) const {
        if (e >= 0) return pow(static_cast<unsigned long>(e));
        return inverse().pow(static_cast<unsigned long>(-e));
    }

    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        if (same_field(a, b) || a.is_rational_value() || b.is_rational_value()) {
            auto [x, y] = promote(a, b);
            return x.coords_ == y.coords_;
        }
        return value_equal(a, b);
    }
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }

    // Complex box of the value, refined below max_radius.
    BoxC approx_box(const Rational& max_radius) const {
        if (is_rational_value()) return BoxC::point(coords_[0], Rational(0));
        Rational target = max_radius;
        for (int rounds = 0; rounds < 64; ++rounds) {
            BoxC tb = field_->refine_theta_box(target);
            BoxC mine = interval_eval(coords_poly(), tb, 512);
            if (mine.radius() <= max_radius) return mine;
            target = target / 64;
        }
        throw std::runtime_error("element box refinement stalled");
    }

    // Structural identity: same object, or same minimal polynomial with the
    // exact same isolating box (two isolating boxes with identical bounds pin
    // the same root; overlapping-but-different boxes do not, so they are not
    // merged here and go through value_equal instead).
    static bool same_field(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        if (a.field_ == b.field_) return true;
        if (a.field_->min_poly() != b.field_->min_poly()) return false;
        BoxC ba = a.field_->theta_box(), bb = b.field_->theta_box();
        return ba.re.lo == bb.re.lo && ba.re.hi == bb.re.hi && ba.im.lo == bb.im.lo &&
               ba.im.hi == bb.im.hi;
    }

    // Coerce rational values into the other operand's field.
    static std::pair<AlgebraicNumber, AlgebraicNumber> promote(const AlgebraicNumber& a,
                                                               const AlgebraicNumber& b) {
        if (a.field_ == b.field_) return {a, b};
        if (same_field(a, b)) return {a, AlgebraicNumber(a.field_, b.coords_)};
        if (a.field_->degree() == 1 && b.field_->degree() > 1)
            return {AlgebraicNumber(b.field_, make_scalar(b.field_, a.coords_[0])), b};
        if (b.field_->degree() == 1 && a.field_->degree() > 1)
            return {a, AlgebraicNumber(a.field_, make_scalar(a.field_, b.coords_[0]))};
        if (a.field_->degree() == 1 && b.field_->degree() == 1)
            return {AlgebraicNumber(a.coords_[0]), AlgebraicNumber(b.coords_[0])};
        throw std::domain_error("algebraic numbers from unrelated fields; embed explicitly");
    }

  private:
    static std::vector<Rational> make_scalar(const FieldPtr& f, const Rational& q) {
        std::vector<Rational> c(f->degree(), Rational(0));
        c[0] = q;
        return c;
    }

    static void reduce_mod(std::vector<Rational>& c, const UniPoly& m) {
        long d = m.degree();
        for (long i = static_cast<long>(c.size()) - 1; i >= d; --i) {
            if (c[i] == 0) continue;
            Rational f = c[i];
            c[i] = 0;
            for (long j = 0; j < d; ++j) c[i - d + j] -= f * m[j];
        }
    }

    static bool value_equal(const AlgebraicNumber& a, const AlgebraicNumber& b);

    FieldPtr field_;
    std::vector<Rational> coords_;
};

inline AlgebraicNumber field_inv(const AlgebraicNumber& a) { return a.inverse(); }
inline bool scalar_is_zero(const AlgebraicNumber& a) { return a.is_zero(); }

// ---- polynomials with AlgebraicNumber coefficients (internal helpers) ----

namespace kpoly {

using KPoly = std::vector<AlgebraicNumber>;

inline void trim(KPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}
inline long deg(const KPoly& f) { return static_cast<long>(f.size()) - 1; }

inline KPoly from_unipoly(const UniPoly& f) {
    KPoly r;
    for (const auto& c : f.coeffs()) r.emplace_back(c);
    return r;
}

inline AlgebraicNumber eval(const KPoly& f, const AlgebraicNumber& x) {
    AlgebraicNumber acc;
    for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

inline AlgebraicNumber eval(const UniPoly& f, const AlgebraicNumber& x) {
    AlgebraicNumber acc;
    const auto& c = f.coeffs();
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + AlgebraicNumber(c[i]);
    return acc;
}

inline KPoly mul(const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return {};
    KPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    trim(r);
    return r;
}

inline void divmod(const KPoly& f, const KPoly& g, KPoly& q, KPoly& r) {
    assert(!g.empty());
    r = f;
    q.assign(f.size() > g.size() ? f.size() - g.size() + 1 : 1, AlgebraicNumber());
    AlgebraicNumber li = g.back().inverse();
    for (long i = deg(r); i >= deg(g); --i) {
        AlgebraicNumber c = r[i] * li;
        if (c.is_zero()) continue;
        q[i - deg(g)] = c;
        for (size_t j = 0; j < g.size(); ++j)
            r[i - deg(g) + j] = r[i - deg(g) + j] - c * g[j];
    }
    trim(q);
    trim(r);
}

inline KPoly make_monic(KPoly f) {
    if (f.empty() || f.back().is_one()) return f;
    AlgebraicNumber li = f.back().inverse();
    for (auto& c : f) c = c * li;
    return f;
}

inline KPoly gcd(KPoly a, KPoly b) {
    trim(a);
    trim(b);
    // monic remainders keep the coordinate sizes from exploding
    a = make_monic(std::move(a));
    b = make_monic(std::move(b));
    while (!b.empty()) {
        KPoly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = make_monic(std::move(r));
    }
    return a;
}

// f(a*x + b) for rational f, coefficients landing in b's field.
inline KPoly compose_linear(const UniPoly& f, const Rational& a, const AlgebraicNumber& b) {
    KPoly acc;
    KPoly lin{b, AlgebraicNumber(a)};
    const auto& c = f.coeffs();
    for (size_t i = c.size(); i-- > 0;) {
        acc = mul(acc, lin);
        if (acc.empty()) acc.emplace_back(c[i]);
        else acc[0] = acc[0] + AlgebraicNumber(c[i]);
    }
    trim(acc);
    return acc;
}

// Same, but reduced modulo a monic modulus at every Horner step; degrees
// never exceed deg(modulus) - 1.
inline KPoly compose_linear_mod(const UniPoly& f, const Rational& a, const AlgebraicNumber& b,
                                const KPoly& modulus) {
    KPoly acc;
    KPoly lin{b, AlgebraicNumber(a)};
    const auto& c = f.coeffs();
    for (size_t i = c.size(); i-- > 0;) {
        acc = mul(acc, lin);
        if (deg(acc) >= deg(modulus)) {
            KPoly q, r;
            divmod(acc, modulus, q, r);
            acc = std::move(r);
        }
        if (acc.empty()) acc.emplace_back(c[i]);
        else acc[0] = acc[0] + AlgebraicNumber(c[i]);
    }
    trim(acc);
    return acc;
}

}  // namespace kpoly

// Tries to find rho in K with A(rho) = 0 and B(u*rho + v*theta) = 0 via
// modular gcds of A(x) and B(u*x + v*theta) plus CRT; the reconstructed root
// is verified exactly. nullopt when the gcd is not linear or the modular
// route keeps failing (callers fall back to the exact gcd).
inline std::optional<AlgebraicNumber> common_root_modular(const FieldPtr& K, const UniPoly& A,
                                                          const UniPoly& B, const Rational& u,
                                                          const Rational& v) {
    const long D = K->degree();
    if (D == 1) return std::nullopt;
    detail::PrimeStream ps(0xc0ffeeULL);

    using QElem = zp::Poly;               // element of (Z/p)[t]/(m)
    using QPoly = std::vector<QElem>;     // polynomial in x over that ring

    long best_deg = -1;
    std::vector<Int> acc;  // CRT accumulators, D coords of the root
    Int modulus = 1;
    int nonlinear_strikes = 0;

    for (int iter = 0; iter < 220; ++iter) {
        uint64_t p = ps.next();
        zp::Poly m;
        try {
            m = detail::poly_mod(K->min_poly(), p);
        } catch (const std::overflow_error&) {
            continue;
        }
        if (zp::deg(m) != D) continue;
        if (zp::deg(zp::gcd(m, zp::derivative(m, p), p)) != 0) continue;

        bool bad = false;
        auto qmul = [&](const QElem& a, const QElem& b) { return zp::mod(zp::mul(a, b, p), m, p); };
        auto qinv = [&](const QElem& a) -> QElem {
            zp::Poly g, s, t;
            zp::xgcd(a, m, g, s, t, p);
            if (zp::deg(g) != 0) {
                bad = true;
                return {};
            }
            uint64_t c = zp::inv(g[0], p);
            for (auto& x : s) x = mulmod_u64(x, c, p);
            return zp::mod(s, m, p);
        };
        auto qis_zero = [&](const QElem& a) { return a.empty(); };

        auto qtrim = [&](QPoly& f) {
            while (!f.empty() && f.back().empty()) f.pop_back();
        };
        auto qadd = [&](const QPoly& a, const QPoly& b) {
            QPoly r(std::max(a.size(), b.size()));
            for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
            for (size_t i = 0; i < b.size(); ++i) {
                QElem sum(std::max(r[i].size(), b[i].size()), 0);
                for (size_t j = 0; j < r[i].size(); ++j) sum[j] = r[i][j];
                for (size_t j = 0; j < b[i].size(); ++j) sum[j] = (sum[j] + b[i][j]) % p;
                zp::trim(sum);
                r[i] = std::move(sum);
            }
            qtrim(r);
            return r;
        };
        auto qmulp = [&](const QPoly& a, const QPoly& b) {
            QPoly r;
            if (a.empty() || b.empty()) return r;
            r.assign(a.size() + b.size() - 1, QElem{});
            for (size_t i = 0; i < a.size(); ++i)
                for (size_t j = 0; j < b.size(); ++j) {
                    if (a[i].empty() || b[j].empty()) continue;
                    QElem prod = qmul(a[i], b[j]);
                    QElem sum(std::max(r[i + j].size(), prod.size()), 0);
                    for (size_t k = 0; k < r[i + j].size(); ++k) sum[k] = r[i + j][k];
                    for (size_t k = 0; k < prod.size(); ++k) sum[k] = (sum[k] + prod[k]) % p;
                    zp::trim(sum);
                    r[i + j] = std::move(sum);
                }
            qtrim(r);
            return r;
        };

        try {
            // images of A(x) and B(u*x + v*t)
            QPoly Ap;
            for (const auto& c : A.coeffs()) {
                uint64_t cv = detail::mod_of_rational(c, p);
                Ap.push_back(cv ? QElem{cv} : QElem{});
            }
            qtrim(Ap);
            uint64_t uv = detail::mod_of_rational(u, p);
            uint64_t vv = detail::mod_of_rational(v, p);
            QElem vtheta = zp::mod(zp::Poly{0, vv}, m, p);
            QPoly lin{vtheta, QElem{uv}};
            qtrim(lin);
            QPoly Bp;
            for (size_t i = B.coeffs().size(); i-- > 0;) {
                Bp = qmulp(Bp, lin);
                uint64_t cv = detail::mod_of_rational(B.coeffs()[i], p);
                if (cv) {
                    if (Bp.empty()) Bp.push_back(QElem{cv});
                    else Bp = qadd(Bp, QPoly{QElem{cv}});
                }
            }
            qtrim(Bp);

            // Euclid over the quotient ring, monic-normalized
            auto qmonic = [&](QPoly f) {
                if (f.empty()) return f;
                QElem li = qinv(f.back());
                if (bad) return f;
                for (auto& c : f) c = qmul(c, li);
                return f;
            };
            auto qdivmod = [&](const QPoly& f, const QPoly& g, QPoly& r) {
                r = f;
                QElem li = qinv(g.back());
                if (bad) return;
                for (long i = static_cast<long>(r.size()) - 1;
                     i >= static_cast<long>(g.size()) - 1; --i) {
                    if (r[i].empty()) continue;
                    QElem c = qmul(r[i], li);
                    for (size_t j = 0; j < g.size(); ++j) {
                        size_t k = i - (g.size() - 1) + j;
                        QElem sub = qmul(c, g[j]);
                        QElem cur(std::max(r[k].size(), sub.size()), 0);
                        for (size_t z = 0; z < r[k].size(); ++z) cur[z] = r[k][z];
                        for (size_t z = 0; z < sub.size(); ++z) cur[z] = (cur[z] + p - sub[z]) % p;
                        zp::trim(cur);
                        r[k] = std::move(cur);
                    }
                }
                qtrim(r);
            };
            QPoly a = qmonic(Ap), b = qmonic(Bp);
            while (!b.empty() && !bad) {
                QPoly r;
                qdivmod(a, b, r);
                a = std::move(b);
                b = qmonic(std::move(r));
            }
            if (bad) continue;
            long dg = static_cast<long>(a.size()) - 1;
            if (dg != 1) {
                if (best_deg == -1 && ++nonlinear_strikes >= 5) return std::nullopt;
                continue;
            }
            // root = -a[0] (a is monic linear)
            QElem root = a[0];
            for (auto& c : root) c = c ? p - c : 0;

            Int pz(static_cast<unsigned long>(p));
            if (best_deg == -1) {
                best_deg = 1;
                acc.assign(D, Int(0));
                modulus = 1;
            }
            if (modulus == 1) {
                for (long i = 0; i < D; ++i)
                    acc[i] = (i < static_cast<long>(root.size()))
                                 ? Int(static_cast<unsigned long>(root[i]))
                                 : Int(0);
                modulus = pz;
            } else {
                Int inv;
                mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
                for (long i = 0; i < D; ++i) {
                    uint64_t ri = (i < static_cast<long>(root.size())) ? root[i] : 0;
                    Int cur = acc[i] % pz;
                    if (cur < 0) cur += pz;
                    Int delta = (Int(static_cast<unsigned long>(ri)) - cur) * inv % pz;
                    if (delta < 0) delta += pz;
                    acc[i] += modulus * delta;
                }
                modulus *= pz;
            }
            // attempt reconstruction + exact verification
            std::vector<Rational> coords(D);
            bool ok = true;
            for (long i = 0; i < D && ok; ++i) {
                auto rc = detail::rational_reconstruct(acc[i], modulus);
                if (!rc) ok = false;
                else coords[i] = *rc;
            }
            if (!ok) continue;
            AlgebraicNumber rho(K, coords);
            if (!kpoly::eval(A, rho).is_zero()) continue;
            AlgebraicNumber arg = AlgebraicNumber(u) * rho +
                                  AlgebraicNumber(v) * AlgebraicNumber::generator(K);
            if (!kpoly::eval(B, arg).is_zero()) continue;
            return rho;
        } catch (const std::overflow_error&) {
            continue;
        }
    }
    return std::nullopt;
}

// Lagrange interpolation through (points[i], values[i]).
inline UniPoly interpolate(const std::vector<Rational>& points, const std::vector<Rational>& values) {
    assert(points.size() == values.size());
    UniPoly acc;
    for (size_t i = 0; i < points.size(); ++i) {
        UniPoly term = UniPoly::constant(Rational(1));
        Rational denom(1);
        for (size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            term = term * UniPoly::linear(Rational(1), -points[j]);
            denom *= points[i] - points[j];
        }
        acc = acc + term * (values[i] / denom);
    }
    return acc;
}

// N(x) = Res_t(m(t), g(x - s*t)); the roots of N are rho + s*theta over all
// pairs (theta a root of m, rho a root of g).
inline UniPoly resultant_shift(const UniPoly& m, const UniPoly& g, const Rational& s) {
    long n = m.degree() * g.degree();
    std::vector<Rational> pts, vals;
    for (long k = 0; k <= n; ++k) {
        Rational xk(k);
        UniPoly gt = g.compose_linear(-s, xk);  // g(xk - s*t) as poly in t
        pts.push_back(xk);
        vals.push_back(modular_resultant(m, gt));
    }
    return interpolate(pts, vals);
}

// Minimal polynomial via the characteristic polynomial of the multiplication
// map; its unique irreducible factor is the answer.
inline UniPoly min_poly_of(const AlgebraicNumber& a) {
    if (a.is_rational_value()) return UniPoly::linear(Rational(1), -a.rational_value());
    long d = a.field()->degree();
    Mat<Rational> mult(d, d);
    AlgebraicNumber theta = AlgebraicNumber::generator(a.field());
    AlgebraicNumber col = a;
    for (long j = 0; j < d; ++j) {
        for (long i = 0; i < d; ++i) mult.at(i, j) = col.coords()[i];
        col = col * theta;
    }
    auto factors = factor_rational_poly(charpoly(mult));
    assert(factors.size() == 1);
    return factors[0].first;
}

// Writes a as a polynomial of degree < r_degree in r; nullopt when a is not
// in Q(r).
inline std::optional<UniPoly> as_polynomial_in(const AlgebraicNumber& a, const AlgebraicNumber& r,
                                               long r_degree) {
    auto [aa, rr] = AlgebraicNumber::promote(a, r);
    long d = aa.field()->degree();
    Mat<Rational> sys(d, r_degree);
    AlgebraicNumber pw = aa.field()->degree() == 1
                             ? AlgebraicNumber(Rational(1))
                             : AlgebraicNumber::promote(AlgebraicNumber(Rational(1)), rr).first;
    for (long j = 0; j < r_degree; ++j) {
        for (long i = 0; i < d; ++i) sys.at(i, j) = pw.coords()[i];
        pw = pw * rr;
    }
    std::vector<Rational> rhs(aa.coords().begin(), aa.coords().end());
    auto sol = solve_linear(sys, rhs, Rational(1));
    if (!sol) return std::nullopt;
    UniPoly q(*sol);
    if (!(kpoly::eval(q, rr) == aa)) return std::nullopt;
    return q;
}

// ---- splitting fields ----

struct SplittingField {
    FieldPtr field;
    // roots[i] lists the roots of factors[i], sorted by isolating box.
    std::vector<std::vector<AlgebraicNumber>> roots;
};

namespace detail {

// All roots of the rational irreducible g inside K (Trager: factor the norm,
// then one gcd per rational factor of the norm).
inline std::vector<AlgebraicNumber> roots_in_field(const UniPoly& g, const FieldPtr& K) {
    std::vector<AlgebraicNumber> out;
    if (K->degree() == 1 || g.degree() == 1) {
        if (g.degree() == 1) out.emplace_back(-g[0]);
        return out;
    }
    AlgebraicNumber theta = AlgebraicNumber::generator(K);
    for (long s = 1; s <= 40; ++s) {
        UniPoly N = resultant_shift(K->min_poly(), g, Rational(s));
        if (rational_poly_gcd(N, N.derivative()).degree() != 0) continue;
        for (auto& [Ni, mult] : factor_rational_poly(N)) {
            (void)mult;
            auto fast = common_root_modular(K, g, Ni, Rational(1), Rational(s));
            if (fast) {
                out.push_back(*fast);
                continue;
            }
            kpoly::KPoly gk = kpoly::from_unipoly(g);
            kpoly::KPoly shifted = kpoly::compose_linear_mod(
                Ni, Rational(1), AlgebraicNumber(Rational(s)) * theta, gk);
            kpoly::KPoly d = kpoly::gcd(gk, shifted);
            if (kpoly::deg(d) == 1) out.push_back(-(d[0] * d[1].inverse()));
        }
        return out;
    }
    throw std::runtime_error("root search: no squarefree norm shift found");
}

// Match an exact element against isolating boxes of a squarefree polynomial;
// returns the index of the unique box the value lies in.
inline std::optional<size_t> match_box(const AlgebraicNumber& value, const UniPoly& f,
                                       const std::vector<BoxC>& boxes) {
    UniPoly fp = f.derivative();
    std::vector<BoxC> cur = boxes;
    Rational rad(1, 1024);
    for (int round = 0; round < 64; ++round) {
        BoxC vb = value.approx_box(rad);
        size_t hits = 0, winner = 0;
        for (size_t i = 0; i < cur.size(); ++i) {
            if (vb.intersects(cur[i])) {
                ++hits;
                winner = i;
            }
        }
        if (hits == 0) return std::nullopt;
        if (hits == 1) return winner;
        for (auto& b : cur) {
            auto r = krawczyk_refine(f, fp, b, 512);
            if (r) b = *r;
        }
        rad = rad / 1024;
    }
    throw std::runtime_error("box matching did not converge");
}

}  // namespace detail

// Common field containing every root of every (irreducible) input factor,
// built by an iterated primitive element theta_new = theta + c*rho. Two
// shortcuts keep the tower shallow: when only one root of a factor is
// missing it comes from the trace, and after every genuine extension a
// Trager sweep locates all roots of the factor already present in the new
// field.
inline SplittingField splitting_field(const std::vector<UniPoly>& factors) {
    for (const auto& f : factors) assert(f.degree() >= 1 && f.leading() == 1);

    FieldPtr K = NumberField::rationals();
    std::vector<std::vector<std::optional<AlgebraicNumber>>> located(factors.size());
    std::vector<std::vector<BoxC>> factor_boxes(factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
        factor_boxes[i] = isolate_roots(factors[i]);
        located[i].resize(factor_boxes[i].size());
    }

    auto remap_all = [&](const AlgebraicNumber& old_theta_in_new, const FieldPtr& newK) {
        for (auto& group : located)
            for (auto& r : group)
                if (r) r = kpoly::eval(r->coords_poly(), old_theta_in_new);
        (void)newK;
    };

    for (size_t fi = 0; fi < factors.size(); ++fi) {
        const UniPoly& f = factors[fi];
        for (size_t ri = 0; ri < factor_boxes[fi].size(); ++ri) {
            if (located[fi][ri]) continue;
            if (f.degree() == 1) {
                located[fi][ri] = AlgebraicNumber(-f[0]);
                continue;
            }
            // last missing root: sum of roots is -a_{d-1}
            {
                size_t missing = 0;
                for (auto& r : located[fi])
                    if (!r) ++missing;
                if (missing == 1) {
                    AlgebraicNumber sum(-f[f.degree() - 1]);
                    for (auto& r : located[fi])
                        if (r) sum = sum - *r;
                    located[fi][ri] = sum;
                    continue;
                }
            }
            const BoxC target = factor_boxes[fi][ri];
            bool done = false;
            for (long ctry = 1; ctry <= 40 && !done; ++ctry) {
                for (long sign : {1L, -1L}) {
                    Rational c(sign * ctry);
                    // minimal polynomial of c*rho
                    UniPoly fc = f.compose_linear(Rational(1) / c, Rational(0)) *
                                 rat_pow(c, static_cast<unsigned long>(f.degree()));
                    UniPoly N = resultant_shift(K->min_poly(), fc, Rational(1));
                    if (rational_poly_gcd(N, N.derivative()).degree() != 0) continue;
                    auto cand = factor_rational_poly(N);
                    // locate theta' = theta + c*rho among N's factors by box
                    BoxC rho_box = target;
                    UniPoly fprime = f.derivative();
                    BoxC theta_box = K->theta_box();
                    std::vector<char> alive(cand.size(), 1);
                    size_t winner = cand.size();
                    for (int round = 0; round < 64; ++round) {
                        BoxC tp = theta_box + rho_box * c;
                        size_t nalive = 0;
                        for (size_t k = 0; k < cand.size(); ++k) {
                            if (!alive[k]) continue;
                            if (!interval_eval(cand[k].first, tp, 512).contains_zero()) alive[k] = 0;
                            else {
                                ++nalive;
                                winner = k;
                            }
                        }
                        if (nalive == 1) break;
                        assert(nalive > 0);
                        theta_box = K->refine_theta_box(theta_box.radius() / 16);
                        auto rr = krawczyk_refine(f, fprime, rho_box, 512);
                        if (rr) rho_box = *rr;
                        winner = cand.size();
                    }
                    if (winner == cand.size()) continue;
                    const UniPoly& mnew = cand[winner].first;
                    // certify the isolating box for theta' w.r.t. mnew
                    BoxC tp_box = theta_box + rho_box * c;
                    UniPoly dmnew = mnew.derivative();
                    std::optional<BoxC> certified;
                    for (int round = 0; round < 64 && !certified; ++round) {
                        certified = krawczyk_refine(mnew, dmnew, tp_box, 512);
                        if (!certified) {
                            theta_box = K->refine_theta_box(theta_box.radius() / 16);
                            auto rr = krawczyk_refine(f, fprime, rho_box, 512);
                            if (rr) rho_box = *rr;
                            tp_box = theta_box + rho_box * c;
                        }
                    }
                    if (!certified) continue;
                    FieldPtr Knew = NumberField::create(mnew, *certified);
                    AlgebraicNumber tnew = AlgebraicNumber::generator(Knew);
                    // rho in the new field: common root of f(x) and
                    // m_old(theta' - c x); modular route first
                    AlgebraicNumber rho;
                    auto fast = common_root_modular(Knew, f, K->min_poly(), -c, Rational(1));
                    if (fast) {
                        rho = *fast;
                    } else {
                        kpoly::KPoly fk = kpoly::from_unipoly(f);
                        kpoly::KPoly g =
                            kpoly::gcd(fk, kpoly::compose_linear_mod(K->min_poly(), -c, tnew, fk));
                        if (kpoly::deg(g) != 1) continue;
                        rho = -(g[0] * g[1].inverse());
                    }
                    AlgebraicNumber old_theta = tnew - AlgebraicNumber(c) * rho;
                    assert(kpoly::eval(K->min_poly(), old_theta).is_zero());
                    remap_all(old_theta, Knew);
                    K = Knew;
                    located[fi][ri] = rho;
                    // sweep: the new field may contain further roots of f
                    // (with exactly two missing the trace shortcut plus one
                    // more extension is cheaper than the norm factorization)
                    size_t missing = 0;
                    for (auto& r : located[fi])
                        if (!r) ++missing;
                    if (missing >= 3) {
                        for (auto& found : detail::roots_in_field(f, K)) {
                            auto idx = detail::match_box(found, f, factor_boxes[fi]);
                            if (idx && !located[fi][*idx]) located[fi][*idx] = found;
                        }
                    }
                    done = true;
                    break;
                }
            }
            if (!done) throw std::runtime_error("splitting field: no separating shift found");
        }
    }

    SplittingField out;
    out.field = K;
    out.roots.resize(factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
        for (auto& r : located[i]) {
            assert(r);
            // normalize into the final field (rationals may remain degree-1)
            if (r->field() != K && K->degree() > 1) {
                auto [x, y] = AlgebraicNumber::promote(*r, AlgebraicNumber::generator(K));
                out.roots[i].push_back(x);
            } else {
                out.roots[i].push_back(*r);
            }
        }
        for (const auto& r : out.roots[i]) {
            assert(kpoly::eval(factors[i], r).is_zero());
        }
    }
    return out;
}

// ---- conjugates and roots of unity ----

struct ConjugateSet {
    AlgebraicNumber element;
    std::vector<AlgebraicNumber> conjugates;  // box-sorted, includes the element
};

inline bool AlgebraicNumber::value_equal(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    UniPoly ma = min_poly_of(a);
    if (ma != min_poly_of(b)) return false;
    Rational rad(1, 16);
    for (int round = 0; round < 64; ++round) {
        BoxC ba = a.approx_box(rad);
        BoxC bb = b.approx_box(rad);
        if (!ba.intersects(bb)) return false;
        // both boxes small and overlapping: equal iff they pin the same root
        auto ref = krawczyk_refine(ma, ma.derivative(), BoxC::square(ba.center_re(), ba.center_im(),
                                                                    ba.radius() + bb.radius() + rad),
                                   512);
        if (ref) return true;  // a unique root in a box containing both values
        rad = rad / 64;
    }
    throw std::runtime_error("value comparison did not converge");
}

// Sort key used everywhere conjugates or eigenvalues need a stable order.
inline bool box_order(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    Rational rad(1, 4);
    for (int round = 0; round < 128; ++round) {
        BoxC ba = a.approx_box(rad), bb = b.approx_box(rad);
        if (ba.re.hi < bb.re.lo) return true;
        if (bb.re.hi < ba.re.lo) return false;
        if (ba.im.hi < bb.im.lo) return true;
        if (bb.im.hi < ba.im.lo) return false;
        if (ba.center_re() == bb.center_re() && ba.center_im() == bb.center_im() &&
            ba.radius() == bb.radius())
            return false;  // identical values
        rad = rad / 256;
    }
    return false;
}

inline ConjugateSet conjugates(const AlgebraicNumber& a) {
    UniPoly m = min_poly_of(a);
    std::vector<AlgebraicNumber> roots = detail::roots_in_field(m, a.field());
    if (static_cast<long>(roots.size()) != m.degree()) {
        // field is not normal over Q; move to the splitting field of m
        auto split = splitting_field({m});
        roots = split.roots[0];
    }
    std::sort(roots.begin(), roots.end(), box_order);
    return ConjugateSet{a, std::move(roots)};
}

// Least n >= 1 with a^n = 1; the search is capped by phi(n) <= deg(a).
inline std::optional<unsigned long> root_of_unity_order(const AlgebraicNumber& a) {
    if (a.is_zero()) throw std::domain_error("root-of-unity test on zero");
    unsigned long deg = static_cast<unsigned long>(min_poly_of(a).degree());
    unsigned long cap = 2 * deg * deg + 2;
    AlgebraicNumber p = a;
    for (unsigned long n = 1; n <= cap; ++n) {
        if (euler_phi(n) <= deg && p.is_one()) return n;
        p = p * a;
    }
    return std::nullopt;
}

}  // namespace loopinv
