// Test-side generators and brute-force oracles. Nothing here goes through the
// library's fiber bases or recursions; everything is dense and explicit.

#pragma once

#include "subprod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using subprod::cd;
using subprod::Index;
using subprod::Mat;
using subprod::Vec;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double real(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    cd gauss() {
        std::normal_distribution<double> n(0.0, 1.0);
        const double re = n(eng_);
        const double im = n(eng_);
        return {re, im};
    }
    Mat matrix(Index r, Index c) {
        Mat m(r, c);
        for (Index j = 0; j < c; ++j)
            for (Index i = 0; i < r; ++i) m(i, j) = gauss();
        return m;
    }
    Vec unit(Index n) {
        Vec v = matrix(n, 1);
        return v / v.norm();
    }
    Mat unitary(Index n) {
        Eigen::HouseholderQR<Mat> qr(matrix(n, n));
        Mat q = qr.householderQ();
        return q;
    }
    cd phase() {
        const double t = real(0.0, 2 * M_PI);
        return {std::cos(t), std::sin(t)};
    }

    // Arbitrary tuple rescaled so that ||(T_1 ... T_d)|| = scale.
    std::vector<Mat> row_contraction(int d, Index h, double scale) {
        std::vector<Mat> ts;
        for (int i = 0; i < d; ++i) ts.push_back(matrix(h, h));
        return rescale(ts, scale);
    }

    // Commuting tuple: polynomials of degree <= 2 in one random matrix.
    std::vector<Mat> commuting(int d, Index h, double scale) {
        const Mat m = matrix(h, h) / std::sqrt(static_cast<double>(h));
        std::vector<Mat> ts;
        for (int i = 0; i < d; ++i) ts.push_back(gauss() * Mat::Identity(h, h) + gauss() * m + gauss() * m * m);
        return rescale(ts, scale);
    }

    // Commuting normal tuple with joint eigenvalues on the unit sphere of C^d.
    std::vector<Mat> spherical(int d, Index h, bool conjugate = true) {
        std::vector<Mat> ts(d, Mat::Zero(h, h));
        for (Index k = 0; k < h; ++k) {
            const Vec u = unit(d);
            for (int i = 0; i < d; ++i) ts[i](k, k) = u(i);
        }
        if (conjugate) {
            const Mat w = unitary(h);
            for (auto& t : ts) t = w * t * w.adjoint();
        }
        return ts;
    }

    static std::vector<Mat> rescale(std::vector<Mat> ts, double scale) {
        const double n = std::sqrt(row_gram(ts).selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff());
        for (auto& t : ts) t *= scale / n;
        return ts;
    }

    static Mat row_gram(const std::vector<Mat>& ts) {
        Mat g = Mat::Zero(ts[0].rows(), ts[0].rows());
        for (const auto& t : ts) g += t * t.adjoint();
        return g;
    }

private:
    std::mt19937_64 eng_;
};

inline Index ipow(Index b, int e) {
    Index r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Letters of a lexicographic multi-index.
inline std::vector<int> letters(Index code, int d, int n) {
    std::vector<int> out(n);
    for (int k = n - 1; k >= 0; --k) {
        out[k] = static_cast<int>(code % d);
        code /= d;
    }
    return out;
}

inline Index code_of(const std::vector<int>& ls, int d) {
    Index c = 0;
    for (int l : ls) c = c * d + l;
    return c;
}

// (1/n!) Sum over permutations of tensor positions.
inline Mat symmetrizer(int d, int n) {
    const Index dim = ipow(d, n);
    Mat p = Mat::Zero(dim, dim);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0;
    do {
        for (Index c = 0; c < dim; ++c) {
            const auto ls = letters(c, d, n);
            std::vector<int> moved(n);
            for (int k = 0; k < n; ++k) moved[k] = ls[perm[k]];
            p(code_of(moved, d), c) += 1.0;
        }
        count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return p / count;
}

inline Mat word(const std::vector<Mat>& ts, const std::vector<int>& ls) {
    Mat out = Mat::Identity(ts[0].rows(), ts[0].rows());
    for (int l : ls) out = out * ts[l];
    return out;
}

// Sum_{a,b} p(a,b) T_a T_b^* over words of length n: the row Gram for the
// fiber whose projection is p.
inline Mat projected_row_gram(const std::vector<Mat>& ts, const Mat& p, int n) {
    const int d = static_cast<int>(ts.size());
    const Index dim = ipow(d, n);
    std::vector<Mat> words;
    for (Index c = 0; c < dim; ++c) words.push_back(word(ts, letters(c, d, n)));
    Mat out = Mat::Zero(ts[0].rows(), ts[0].rows());
    for (Index a = 0; a < dim; ++a)
        for (Index b = 0; b < dim; ++b)
            if (std::abs(p(a, b)) > 0) out += p(a, b) * words[a] * words[b].adjoint();
    return out;
}

inline double opnorm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Left creation operator zeta (x) - on the ambient full Fock space of depth N,
// followed by the level projections. projections[k] is p_k (d^k x d^k).
inline Mat ambient_shift(const std::vector<Mat>& projections, int d, int n, const Vec& zeta_amb, int N) {
    std::vector<Index> off(N + 2, 0);
    for (int k = 0; k <= N; ++k) off[k + 1] = off[k] + ipow(d, k);
    Mat s = Mat::Zero(off[N + 1], off[N + 1]);
    for (int m = 0; m + n <= N; ++m) {
        const Mat blk = projections[n + m] * kron(zeta_amb, Mat::Identity(ipow(d, m), ipow(d, m))) * projections[m];
        s.block(off[n + m], off[m], blk.rows(), blk.cols()) = blk;
    }
    return s;
}

}  // namespace oracle
