#include "subprod/random.hpp"

#include <cmath>
#include <numbers>

namespace subprod {

namespace {

std::vector<Mat> rescale_row(std::vector<Mat> ops, double scale) {
    const Index h = ops.front().rows();
    Mat a = Mat::Zero(h, h);
    for (const auto& t : ops) a.noalias() += t * t.adjoint();
    const double norm = std::sqrt(std::max(0.0, max_eigenvalue(a)));
    if (norm > 0.0)
        for (auto& t : ops) t *= scale / norm;
    return ops;
}

}  // namespace

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

cd Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return cd(re, im) / std::sqrt(2.0);
}

Mat Rng::ginibre(Index rows, Index cols) {
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
}

Vec Rng::unit_vector(Index n) {
    Vec v = ginibre(n, 1);
    return v / v.norm();
}

Mat Rng::unitary(Index n) {
    const Mat g = ginibre(n, n);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the distribution is Haar.
    for (Index k = 0; k < n; ++k) {
        const cd diag = r(k, k);
        if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
    }
    return q;
}

cd Rng::phase() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

std::vector<Mat> random_row_contraction(Rng& rng, int d, Index h, double scale) {
    std::vector<Mat> ops;
    for (int i = 0; i < d; ++i) ops.push_back(rng.ginibre(h, h));
    return rescale_row(std::move(ops), scale);
}

std::vector<Mat> random_commuting_normal(Rng& rng, int d, Index h, double scale) {
    const Mat u = rng.unitary(h);
    std::vector<Mat> ops;
    for (int i = 0; i < d; ++i) {
        const Vec lambda = rng.ginibre(h, 1);
        ops.push_back(u * lambda.asDiagonal() * u.adjoint());
    }
    return rescale_row(std::move(ops), scale);
}

std::vector<Mat> random_commuting_polynomial(Rng& rng, int d, Index h, double scale) {
    const Mat m = rng.ginibre(h, h);
    std::vector<Mat> powers{Mat::Identity(h, h)};
    for (Index k = 1; k < h; ++k) powers.push_back(powers.back() * m);
    std::vector<Mat> ops;
    for (int i = 0; i < d; ++i) {
        Mat t = Mat::Zero(h, h);
        for (const auto& pw : powers) t += rng.complex_normal() * pw;
        ops.push_back(std::move(t));
    }
    return rescale_row(std::move(ops), scale);
}

std::vector<Mat> random_spherical_diagonal(Rng& rng, int d, Index h) {
    std::vector<Mat> ops(d, Mat::Zero(h, h));
    for (Index k = 0; k < h; ++k) {
        const Vec v = rng.unit_vector(d);
        for (int i = 0; i < d; ++i) ops[i](k, k) = v(i);
    }
    return ops;
}

}  // namespace subprod
