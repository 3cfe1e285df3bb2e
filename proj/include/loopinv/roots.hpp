#pragma once

// Certified complex root isolation for squarefree rational polynomials.
// Floating-point seeds (companion-matrix eigenvalues) are certified and
// refined with a Krawczyk step over exact rational boxes, so the returned
// boxes each contain exactly one root and are pairwise disjoint.

#include <loopinv/interval.hpp>

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace loopinv {

namespace detail {

inline Rational dyadic_of_double(double x, unsigned prec = 64) {
    if (x == 0.0) return Rational(0);
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    Int scale = int_pow(2, prec);
    Int n = numerator(r * scale) / denominator(r * scale);
    return make_rational(n, scale);
}

struct CRat {
    Rational re, im;
    CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
    CRat operator*(const CRat& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    CRat inverse() const {
        Rational n = re * re + im * im;
        if (n == 0) throw std::domain_error("inverse of complex zero");
        return {re / n, -im / n};
    }
};

inline CRat eval_crat(const UniPoly& f, const CRat& z) {
    CRat acc{Rational(0), Rational(0)};
    const auto& c = f.coeffs();
    for (size_t i = c.size(); i-- > 0;) {
        acc = acc * z;
        acc.re += c[i];
    }
    return acc;
}

inline Rational round_prec(const Rational& q, unsigned prec) {
    Int scale = int_pow(2, prec);
    Int n = numerator(q * scale) / denominator(q * scale);
    return make_rational(n, scale);
}

}  // namespace detail

// One certification/refinement step. Returns the refined box (a subset of
// the input) when the Krawczyk operator proves a unique root inside,
// std::nullopt otherwise. Monotone: the result is contained in `box`.
inline std::optional<BoxC> krawczyk_refine(const UniPoly& f, const UniPoly& fprime, const BoxC& box,
                                           unsigned prec = 128) {
    using detail::CRat;
    // keep the working precision well below the box radius
    {
        Rational r = box.radius();
        if (r > 0) {
            long scale = static_cast<long>(mpz_sizeinbase(denominator(r).get_mpz_t(), 2)) -
                         static_cast<long>(mpz_sizeinbase(numerator(r).get_mpz_t(), 2));
            if (scale > 0 && static_cast<unsigned>(scale) + 96 > prec)
                prec = static_cast<unsigned>(scale) + 96;
        }
    }
    CRat m{box.center_re(), box.center_im()};
    CRat fm = detail::eval_crat(f, m);
    CRat dm = detail::eval_crat(fprime, m);
    if (dm.re == 0 && dm.im == 0) return std::nullopt;
    CRat y = dm.inverse();

    BoxC dbox = interval_eval(fprime, box, prec + 16);
    // E = I - Y * J(box) in complex form: 1 - y * f'(box)
    BoxC ybox{QInterval::point(y.re), QInterval::point(y.im)};
    BoxC e = BoxC::point(Rational(1), Rational(0)) - ybox * dbox;
    // K = m - y*f(m) + E * (box - m)
    CRat step = y * fm;
    BoxC centered = box - BoxC::point(m.re, m.im);
    BoxC k = BoxC::point(m.re - step.re, m.im - step.im) + e * centered;
    k = k.round_out(prec);
    if (!k.subset_of_interior(box)) return std::nullopt;
    return BoxC::intersect(k, box);
}

// All complex roots of a squarefree polynomial, as certified disjoint boxes
// sorted by (Re, Im) of the centers.
inline std::vector<BoxC> isolate_roots(const UniPoly& f_in) {
    UniPoly f = f_in.monic();
    long n = f.degree();
    if (n <= 0) {
        if (n < 0) throw std::domain_error("roots of zero polynomial");
        return {};
    }
    UniPoly fp = f.derivative();

    // floating seeds from the companion matrix
    std::vector<std::complex<double>> seeds;
    {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
        for (long i = 0; i < n; ++i) {
            double ci = f[i].get_d();
            comp(i, n - 1) = -ci;
            if (i + 1 < n) comp(i + 1, i) = 1.0;
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
        for (long i = 0; i < n; ++i) seeds.push_back(es.eigenvalues()(i));
    }

    // polish seeds with plain Newton in doubles
    auto eval_d = [&](const std::complex<double>& z, const UniPoly& g) {
        std::complex<double> acc = 0.0;
        const auto& c = g.coeffs();
        for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i].get_d();
        return acc;
    };
    for (auto& z : seeds) {
        for (int it = 0; it < 40; ++it) {
            auto d = eval_d(z, fp);
            if (std::abs(d) < 1e-300) break;
            auto delta = eval_d(z, f) / d;
            z -= delta;
            if (std::abs(delta) < 1e-14 * std::max(1.0, std::abs(z))) break;
        }
    }

    std::vector<BoxC> boxes;
    for (const auto& seed : seeds) {
        bool done = false;
        unsigned prec = 128;
        double rad = 1e-10 * std::max(1.0, std::abs(seed));
        Rational cre = detail::dyadic_of_double(seed.real());
        Rational cim = detail::dyadic_of_double(seed.imag());
        for (int attempt = 0; attempt < 48 && !done; ++attempt) {
            BoxC box = BoxC::square(cre, cim, detail::dyadic_of_double(rad));
            auto refined = krawczyk_refine(f, fp, box, prec);
            if (refined) {
                boxes.push_back(*refined);
                done = true;
                break;
            }
            if (attempt % 3 == 2) {
                // sharpen the center with one exact Newton step at higher precision
                detail::CRat m{cre, cim};
                detail::CRat d = detail::eval_crat(fp, m);
                if (!(d.re == 0 && d.im == 0)) {
                    detail::CRat delta = detail::eval_crat(f, m) * d.inverse();
                    prec *= 2;
                    cre = detail::round_prec(m.re - delta.re, prec);
                    cim = detail::round_prec(m.im - delta.im, prec);
                }
                rad *= 16;  // recenter changed; restart radius sweep nearer
            }
            rad /= 8;
            if (rad < 1e-290) rad = 1e-290;
        }
        if (!done) throw std::runtime_error("root isolation failed to certify a seed");
    }

    // shrink until pairwise disjoint
    for (int round = 0; round < 64; ++round) {
        bool clash = false;
        for (size_t i = 0; i < boxes.size() && !clash; ++i)
            for (size_t j = i + 1; j < boxes.size() && !clash; ++j)
                if (boxes[i].intersects(boxes[j])) clash = true;
        if (!clash) break;
        for (auto& b : boxes) {
            auto r = krawczyk_refine(f, fp, b, 256 + 64 * round);
            if (r) b = *r;
        }
        if (round == 63) throw std::runtime_error("root isolation could not separate roots");
    }

    std::sort(boxes.begin(), boxes.end(), [](const BoxC& a, const BoxC& b) {
        Rational ar = a.center_re(), br = b.center_re();
        if (ar != br) return ar < br;
        return a.center_im() < b.center_im();
    });
    if (boxes.size() != static_cast<size_t>(n))
        throw std::runtime_error("root isolation found a wrong number of roots");
    return boxes;
}

}  // namespace loopinv
