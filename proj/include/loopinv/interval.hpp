#pragma once

// Rational interval and complex-box arithmetic. Endpoints are exact
// rationals; round_out() compresses endpoints to dyadics of a given
// precision so repeated operations cannot blow up bit lengths.

#include <loopinv/unipoly.hpp>

namespace loopinv {

struct QInterval {
    Rational lo, hi;

    QInterval() : lo(0), hi(0) {}
    QInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) { assert(lo <= hi); }
    static QInterval point(const Rational& v) { return {v, v}; }

    Rational mid() const { return (lo + hi) / 2; }
    Rational radius() const { return (hi - lo) / 2; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool subset_of_interior(const QInterval& o) const { return o.lo < lo && hi < o.hi; }
    bool intersects(const QInterval& o) const { return !(hi < o.lo || o.hi < lo); }

    QInterval operator+(const QInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    QInterval operator-(const QInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    QInterval operator-() const { return {-hi, -lo}; }
    QInterval operator*(const QInterval& o) const {
        Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
    }
    QInterval operator*(const Rational& s) const {
        return s >= 0 ? QInterval{lo * s, hi * s} : QInterval{hi * s, lo * s};
    }
    QInterval operator+(const Rational& s) const { return {lo + s, hi + s}; }

    static QInterval intersect(const QInterval& a, const QInterval& b) {
        return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    }

    // Smallest enclosing interval with dyadic endpoints of denominator 2^prec.
    QInterval round_out(unsigned prec) const {
        Int scale = int_pow(2, prec);
        Int l, h;
        mpz_fdiv_q(l.get_mpz_t(), Rational(lo * scale).get_num_mpz_t(),
                   Rational(lo * scale).get_den_mpz_t());
        mpz_cdiv_q(h.get_mpz_t(), Rational(hi * scale).get_num_mpz_t(),
                   Rational(hi * scale).get_den_mpz_t());
        return {make_rational(l, scale), make_rational(h, scale)};
    }
};

struct BoxC {
    QInterval re, im;

    BoxC() = default;
    BoxC(QInterval r, QInterval i) : re(std::move(r)), im(std::move(i)) {}
    static BoxC point(const Rational& r, const Rational& i) {
        return {QInterval::point(r), QInterval::point(i)};
    }
    static BoxC square(const Rational& cr, const Rational& ci, const Rational& rad) {
        assert(rad >= 0);
        return {{cr - rad, cr + rad}, {ci - rad, ci + rad}};
    }

    Rational center_re() const { return re.mid(); }
    Rational center_im() const { return im.mid(); }
    Rational radius() const { return std::max(re.radius(), im.radius()); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool subset_of_interior(const BoxC& o) const {
        return re.subset_of_interior(o.re) && im.subset_of_interior(o.im);
    }
    bool intersects(const BoxC& o) const { return re.intersects(o.re) && im.intersects(o.im); }

    BoxC operator+(const BoxC& o) const { return {re + o.re, im + o.im}; }
    BoxC operator-(const BoxC& o) const { return {re - o.re, im - o.im}; }
    BoxC operator*(const BoxC& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    BoxC operator*(const Rational& s) const { return {re * s, im * s}; }

    static BoxC intersect(const BoxC& a, const BoxC& b) {
        return {QInterval::intersect(a.re, b.re), QInterval::intersect(a.im, b.im)};
    }

    BoxC round_out(unsigned prec) const { return {re.round_out(prec), im.round_out(prec)}; }

    // Interval reciprocal; requires the box to exclude zero.
    BoxC inverse() const {
        QInterval n = re * re + im * im;
        assert(n.lo > 0);
        QInterval ninv{Rational(1) / n.hi, Rational(1) / n.lo};
        return {re * ninv, -(im * ninv)};
    }
};

// Horner evaluation of a rational polynomial over a complex box.
inline BoxC interval_eval(const UniPoly& f, const BoxC& z, unsigned prec = 0) {
    BoxC acc;
    const auto& c = f.coeffs();
    for (size_t i = c.size(); i-- > 0;) {
        acc = acc * z + BoxC::point(c[i], Rational(0));
        if (prec) acc = acc.round_out(prec);
    }
    return acc;
}

}  // namespace loopinv
