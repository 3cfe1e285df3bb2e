#pragma once

// Exact Jordan decomposition of rational matrices over the splitting field
// of the characteristic polynomial, with the block order normalized (zero
// eigenvalues first) and the auxiliary transforms used by the closure
// pipeline: the fingerprint normalization U and the Stirling-based R.

#include <loopinv/numberfield.hpp>

namespace loopinv {

struct Loop {
    Mat<Rational> update;        // d x d
    std::vector<Rational> init;  // length d

    size_t dim() const { return init.size(); }

    void validate() const {
        if (update.rows() == 0 || update.rows() != update.cols() || update.rows() != init.size())
            throw std::invalid_argument("loop dimensions inconsistent");
    }
};

struct JordanBlock {
    AlgebraicNumber eigen;  // element of the splitting field
    size_t size = 0;
    size_t offset = 0;       // first coordinate of this block
    UniPoly eigen_minpoly;   // irreducible over Q
    size_t root_index = 0;   // index of the eigenvalue among the box-sorted roots
    bool zero_eigen = false;
};

using KMat = Mat<AlgebraicNumber>;
using KVec = std::vector<AlgebraicNumber>;

struct JordanData {
    FieldPtr field;
    std::vector<JordanBlock> blocks;
    KMat P, Pinv, J, Jtilde;
    size_t d0 = 0;         // dimension of the nilpotent part
    size_t nil_index = 0;  // m with N^m = 0 (0 when there is no zero eigenvalue)
    size_t n0 = 0;         // number of distinct candidate isolated points
    KVec gamma;            // J^n0 * P^-1 * init
    std::vector<std::vector<Rational>> isolated_points;  // M^i * init, 0 <= i < n0

    size_t dim() const { return P.rows(); }
};

namespace detail {

// Jordan chains of M for the eigenvalue class of the irreducible factor f,
// computed once over the abstract field Q[u]/(f); every conjugate root reuses
// the same chain polynomials, which keeps conjugate blocks consistent.
inline std::vector<std::vector<KVec>> jordan_chains(const Mat<Rational>& M, const UniPoly& f,
                                                    int multiplicity, const BoxC& rep_box) {
    size_t d = M.rows();
    FieldPtr rep = NumberField::create(f, rep_box);
    AlgebraicNumber lambda = AlgebraicNumber::generator(rep);
    AlgebraicNumber one_rep = AlgebraicNumber::promote(AlgebraicNumber(Rational(1)), lambda).first;

    KMat B(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            B.at(i, j) = AlgebraicNumber(M.at(i, j));
            if (i == j) B.at(i, j) = B.at(i, j) - lambda;
        }

    // kernels of B^j until the full generalized eigenspace is reached
    std::vector<std::vector<KVec>> kernels;  // kernels[j-1] = basis of ker B^j
    KMat Bp = B;
    while (true) {
        kernels.push_back(kernel_basis(Bp, one_rep));
        if (static_cast<int>(kernels.back().size()) >= multiplicity) break;
        Bp = Bp * B;
        if (kernels.size() > d) throw std::logic_error("jordan: kernel chain runaway");
    }
    size_t mmax = kernels.size();

    auto rank_of = [&](const std::vector<KVec>& vecs) {
        if (vecs.empty()) return size_t{0};
        KMat m(vecs.size(), d);
        for (size_t i = 0; i < vecs.size(); ++i)
            for (size_t j = 0; j < d; ++j) m.at(i, j) = vecs[i][j];
        return row_echelon(m);
    };

    std::vector<std::pair<KVec, size_t>> tops;  // (top vector, chain length)
    for (size_t j = mmax; j >= 1; --j) {
        std::vector<KVec> span;  // ker B^{j-1} plus mapped-down vectors of longer chains
        if (j >= 2)
            for (auto& v : kernels[j - 2]) span.push_back(v);
        for (auto& [top, len] : tops) {
            KVec w = top;
            for (size_t step = 0; step < len - j; ++step) w = B * w;
            span.push_back(w);
        }
        size_t base_rank = rank_of(span);
        for (auto& cand : kernels[j - 1]) {
            span.push_back(cand);
            size_t r = rank_of(span);
            if (r > base_rank) {
                base_rank = r;
                tops.emplace_back(cand, j);
            } else {
                span.pop_back();
            }
        }
    }

    std::vector<std::vector<KVec>> chains;
    for (auto& [top, len] : tops) {
        std::vector<KVec> cols(len);
        KVec cur = top;
        for (size_t i = len; i-- > 0;) {
            cols[i] = cur;
            if (i > 0) cur = B * cur;
        }
        chains.push_back(std::move(cols));  // cols[0] is the eigenvector
    }
    // longest chains first for a stable block layout
    std::stable_sort(chains.begin(), chains.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return chains;
}

}  // namespace detail

inline JordanData jordan_decomposition(const Loop& loop) {
    loop.validate();
    const size_t d = loop.dim();
    const Mat<Rational>& M = loop.update;

    UniPoly cp = charpoly(M);
    auto factors = factor_rational_poly(cp);

    std::vector<UniPoly> fpolys;
    for (auto& [f, mult] : factors) fpolys.push_back(f);
    SplittingField split = splitting_field(fpolys);
    FieldPtr K = split.field;

    // chains per factor over the abstract root, instantiated at each root
    struct PendingBlock {
        size_t factor;
        size_t root_index;
        AlgebraicNumber eigen;
        std::vector<KVec> columns;  // over K
        bool zero_eigen;
    };
    std::vector<PendingBlock> pending;
    for (size_t fi = 0; fi < fpolys.size(); ++fi) {
        const UniPoly& f = fpolys[fi];
        BoxC rep_box = isolate_roots(f).front();
        auto chains = detail::jordan_chains(M, f, factors[fi].second, rep_box);
        for (size_t ri = 0; ri < split.roots[fi].size(); ++ri) {
            const AlgebraicNumber& root = split.roots[fi][ri];
            for (auto& chain : chains) {
                PendingBlock blk;
                blk.factor = fi;
                blk.root_index = ri;
                blk.eigen = root;
                blk.zero_eigen = root.is_zero();
                for (auto& col : chain) {
                    KVec v(d);
                    for (size_t i = 0; i < d; ++i) {
                        // evaluate the rep coordinates at the actual root
                        v[i] = kpoly::eval(col[i].coords_poly(), root);
                    }
                    blk.columns.push_back(std::move(v));
                }
                pending.push_back(std::move(blk));
            }
        }
    }

    // order: zero blocks first (size desc), then by (minpoly coeffs lex,
    // root box order, size desc)
    std::stable_sort(pending.begin(), pending.end(), [&](const PendingBlock& a, const PendingBlock& b) {
        if (a.zero_eigen != b.zero_eigen) return a.zero_eigen;
        if (a.zero_eigen) return a.columns.size() > b.columns.size();
        if (a.factor != b.factor) {
            const auto& ca = fpolys[a.factor].coeffs();
            const auto& cb = fpolys[b.factor].coeffs();
            if (ca.size() != cb.size()) return ca.size() < cb.size();
            for (size_t i = 0; i < ca.size(); ++i)
                if (ca[i] != cb[i]) return ca[i] < cb[i];
            return false;
        }
        if (a.root_index != b.root_index) return a.root_index < b.root_index;
        return a.columns.size() > b.columns.size();
    });

    JordanData jd;
    jd.field = K;
    AlgebraicNumber one = K->degree() == 1
                              ? AlgebraicNumber(Rational(1))
                              : AlgebraicNumber::promote(AlgebraicNumber(Rational(1)),
                                                         AlgebraicNumber::generator(K))
                                    .first;
    jd.P = KMat(d, d);
    jd.J = KMat(d, d);
    size_t off = 0;
    for (auto& blk : pending) {
        JordanBlock jb;
        jb.eigen = blk.eigen;
        jb.size = blk.columns.size();
        jb.offset = off;
        jb.eigen_minpoly = fpolys[blk.factor];
        jb.root_index = blk.root_index;
        jb.zero_eigen = blk.zero_eigen;
        for (size_t c = 0; c < jb.size; ++c) {
            for (size_t i = 0; i < d; ++i) jd.P.at(i, off + c) = blk.columns[c][i];
            jd.J.at(off + c, off + c) = blk.eigen;
            if (c + 1 < jb.size) jd.J.at(off + c, off + c + 1) = one;
        }
        if (jb.zero_eigen) {
            jd.d0 += jb.size;
            jd.nil_index = std::max(jd.nil_index, jb.size);
        }
        jd.blocks.push_back(std::move(jb));
        off += blk.columns.size();
    }
    assert(off == d);

    auto pinv = inverse(jd.P, one);
    if (!pinv) throw std::logic_error("jordan: change of basis is singular");
    jd.Pinv = *pinv;

    jd.Jtilde = jd.J;
    for (auto& blk : jd.blocks)
        if (blk.zero_eigen)
            for (size_t c = 0; c < blk.size; ++c)
                for (size_t j = 0; j < d; ++j) jd.Jtilde.at(blk.offset + c, j) = AlgebraicNumber();

    // candidate isolated points J^i P^-1 alpha, i < nil_index; count distinct
    KVec p0(d);
    {
        KVec alpha(d);
        for (size_t i = 0; i < d; ++i) alpha[i] = AlgebraicNumber(loop.init[i]);
        p0 = jd.Pinv * alpha;
    }
    std::vector<KVec> pts;
    KVec cur = p0;
    for (size_t i = 0; i < jd.nil_index; ++i) {
        pts.push_back(cur);
        cur = jd.J * cur;
    }
    std::vector<KVec> distinct;
    for (auto& p : pts) {
        bool seen = false;
        for (auto& q : distinct)
            if (p == q) seen = true;
        if (!seen) distinct.push_back(p);
    }
    jd.n0 = distinct.size();

    jd.gamma = p0;
    for (size_t i = 0; i < jd.n0; ++i) jd.gamma = jd.J * jd.gamma;

    // loop-space isolated points M^i alpha
    std::vector<Rational> v = loop.init;
    for (size_t i = 0; i < jd.n0; ++i) {
        jd.isolated_points.push_back(v);
        v = M * v;
    }

    // the zero-block part of gamma must be dead by construction
    for (auto& blk : jd.blocks)
        if (blk.zero_eigen)
            for (size_t c = 0; c < blk.size; ++c) assert(jd.gamma[blk.offset + c].is_zero());

    return jd;
}

// 0/1 fingerprint of v with respect to the block partition: per block a
// single 1 at the largest index carrying a nonzero entry.
inline std::vector<Rational> fingerprint(const KVec& v, const std::vector<JordanBlock>& blocks) {
    std::vector<Rational> out(v.size(), Rational(0));
    for (const auto& blk : blocks) {
        for (size_t j = blk.size; j-- > 0;) {
            if (!v[blk.offset + j].is_zero()) {
                out[blk.offset + j] = 1;
                break;
            }
        }
    }
    return out;
}

struct ConvenientData {
    KMat U, Uinv;
    std::vector<Rational> beta;   // 0/1 vector, U * gamma
    std::vector<size_t> kindex;   // per block, position of beta's 1 (0 = none)
};

// Block upper-triangular Toeplitz U with U*gamma = fingerprint(gamma); U
// commutes with J blockwise.
inline ConvenientData convenient_u(const JordanData& jd) {
    size_t d = jd.dim();
    AlgebraicNumber zero;
    ConvenientData cd;
    cd.U = KMat(d, d);
    cd.kindex.assign(jd.blocks.size(), 0);

    for (size_t bi = 0; bi < jd.blocks.size(); ++bi) {
        const auto& blk = jd.blocks[bi];
        size_t r = 0;
        for (size_t j = blk.size; j-- > 0;) {
            if (!jd.gamma[blk.offset + j].is_zero()) {
                r = j + 1;
                break;
            }
        }
        cd.kindex[bi] = r;
        if (r == 0) {
            for (size_t c = 0; c < blk.size; ++c)
                cd.U.at(blk.offset + c, blk.offset + c) = AlgebraicNumber(Rational(1));
            continue;
        }
        // b[r] ... b[1]; U[p][q] = b[r - (q - p)] for 0 <= q-p <= r-1
        std::vector<AlgebraicNumber> b(r + 1);
        b[r] = jd.gamma[blk.offset + r - 1].inverse();
        for (size_t p = r - 1; p >= 1; --p) {
            AlgebraicNumber acc;
            for (size_t q = p; q <= r - 1; ++q)
                acc = acc + b[r - q + p] * jd.gamma[blk.offset + q - 1];
            // row p: acc + b[p]*gamma_r = 0
            b[p] = -(acc * jd.gamma[blk.offset + r - 1].inverse());
        }
        for (size_t p = 0; p < blk.size; ++p)
            for (size_t q = p; q < blk.size; ++q) {
                size_t diff = q - p;
                if (diff <= r - 1)
                    cd.U.at(blk.offset + p, blk.offset + q) = b[r - diff];
            }
    }

    AlgebraicNumber one = AlgebraicNumber(Rational(1));
    auto uinv = inverse(cd.U, one);
    if (!uinv) throw std::logic_error("convenient transform not invertible");
    cd.Uinv = *uinv;

    KVec beta_alg = cd.U * jd.gamma;
    cd.beta.resize(d);
    for (size_t i = 0; i < d; ++i) {
        if (beta_alg[i].is_zero()) cd.beta[i] = 0;
        else if (beta_alg[i].is_one()) cd.beta[i] = 1;
        else throw std::logic_error("fingerprint normalization failed");
    }
    return cd;
}

// Coefficients c_{k,1..k} with n^k = sum_i c_{k,i} * binomial(n,i)
// (c_{k,i} = i! * S(k,i), S the Stirling numbers of the second kind).
inline std::vector<Int> stirling_coeffs(size_t k) {
    assert(k >= 1);
    std::vector<Int> c{Int(1)};  // row k=1
    for (size_t row = 1; row < k; ++row) {
        std::vector<Int> next(row + 1, Int(0));
        for (size_t i = 1; i <= row + 1; ++i) {
            Int prev_i = (i <= row) ? c[i - 1] : Int(0);
            Int prev_im1 = (i >= 2) ? c[i - 2] : Int(0);
            next[i - 1] = Int(static_cast<long>(i)) * (prev_i + prev_im1);
        }
        c = std::move(next);
    }
    return c;
}

struct RData {
    KMat R, Rinv;
};

// Block transform turning binomial-weighted powers into plain n^j powers:
// per block, (R_i J_i^n beta_i)_j = n^{k_i-j} lambda_i^n for j <= k_i.
inline RData build_r(const JordanData& jd, const ConvenientData& cd) {
    size_t d = jd.dim();
    RData rd;
    rd.R = KMat(d, d);
    AlgebraicNumber one(Rational(1));

    for (size_t bi = 0; bi < jd.blocks.size(); ++bi) {
        const auto& blk = jd.blocks[bi];
        size_t k = cd.kindex[bi];
        if (blk.zero_eigen || k == 0) {
            for (size_t c = 0; c < blk.size; ++c) rd.R.at(blk.offset + c, blk.offset + c) = one;
            continue;
        }
        if (blk.eigen.is_zero()) throw std::logic_error("zero eigenvalue in a nonzero block");
        // rows 1..k-1 carry Stirling rows, row k is the bare power
        for (size_t p = 1; p + 1 <= k; ++p) {
            auto coeffs = stirling_coeffs(k - p);  // c_{k-p, 1..k-p}
            for (size_t q = p; q + 1 <= k; ++q) {
                // entry = c_{k-p, k-q} * lambda^{k-q}
                Int cc = coeffs[k - q - 1];
                rd.R.at(blk.offset + p - 1, blk.offset + q - 1) =
                    blk.eigen.pow(k - q) * AlgebraicNumber(Rational(cc));
            }
        }
        rd.R.at(blk.offset + k - 1, blk.offset + k - 1) = one;
        for (size_t c = k; c < blk.size; ++c) rd.R.at(blk.offset + c, blk.offset + c) = one;
    }

    auto rinv = inverse(rd.R, one);
    if (!rinv) throw std::logic_error("R transform not invertible");
    rd.Rinv = *rinv;
    return rd;
}

}  // namespace loopinv
