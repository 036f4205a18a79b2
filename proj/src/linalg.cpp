#include "subprod/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subprod {

double op_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    // Largest eigenvalue of the Gram matrix on the short side.
    Mat g = (a.rows() <= a.cols()) ? Mat(a * a.adjoint()) : Mat(a.adjoint() * a);
    return std::sqrt(std::max(0.0, max_eigenvalue(g)));
}

double op_norm(const SpMat& a) {
    if (a.nonZeros() == 0) return 0.0;
    Mat g = (a.rows() <= a.cols()) ? Mat(a * SpMat(a.adjoint())) : Mat(SpMat(a.adjoint()) * a);
    return std::sqrt(std::max(0.0, max_eigenvalue(g)));
}

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) * 0.5; }

HermitianSpectrum hermitian_eig(const Mat& hermitian) {
    if (hermitian.rows() != hermitian.cols())
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    if (hermitian.rows() == 0) return {RVec(0), Mat(0, 0)};
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian));
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

double max_eigenvalue(const Mat& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double min_eigenvalue(const Mat& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Mat psd_sqrt(const Mat& psd, double floor) {
    auto sp = hermitian_eig(psd);
    RVec roots = sp.values.unaryExpr([floor](double v) { return v <= floor ? 0.0 : std::sqrt(v); });
    return sp.vectors * roots.cast<cd>().asDiagonal() * sp.vectors.adjoint();
}

// Rank-revealing QR: pivots below rel_cutoff times the largest count as zero.
Mat range_basis(const Mat& a, double rel_cutoff) {
    if (a.rows() == 0) return Mat(0, 0);
    if (a.cols() == 0 || a.isZero(0.0)) return Mat(a.rows(), 0);
    Eigen::ColPivHouseholderQR<Mat> qr(a);
    qr.setThreshold(rel_cutoff);
    return qr.householderQ() * Mat::Identity(a.rows(), qr.rank());
}

Mat complement_basis(const Mat& a, double rel_cutoff) {
    const Index n = a.rows();
    if (a.cols() == 0 || a.isZero(0.0)) return Mat::Identity(n, n);
    Eigen::ColPivHouseholderQR<Mat> qr(a);
    qr.setThreshold(rel_cutoff);
    const Mat q = qr.householderQ();
    return q.rightCols(n - qr.rank());
}

Mat pseudo_inverse(const Mat& a, double rel_cutoff) {
    if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    RVec inv = RVec::Zero(s.size());
    if (s.size() > 0 && s(0) > 0.0) {
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > rel_cutoff * s(0)) inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * inv.cast<cd>().asDiagonal() * svd.matrixU().adjoint();
}

std::int64_t int_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::int64_t>::max() / base) return -1;
        r *= base;
    }
    return r;
}

SpMat sparse_identity(Index n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

SpMat to_sparse(const Mat& a, double drop) {
    std::vector<Eigen::Triplet<cd>> trips;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (std::abs(a(i, j)) > drop) trips.emplace_back(i, j, a(i, j));
    SpMat s(a.rows(), a.cols());
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
}

SpMat sparse_kron(const SpMat& a, const SpMat& b) {
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    out.makeCompressed();
    return out;
}

Mat apply_left_identity_kron(Index outer, const Mat& a, const Mat& x) {
    if (x.rows() != outer * a.cols())
        throw std::invalid_argument("apply_left_identity_kron: dimension mismatch");
    Mat y(outer * a.rows(), x.cols());
    for (Index b = 0; b < outer; ++b)
        y.middleRows(b * a.rows(), a.rows()).noalias() = a * x.middleRows(b * a.cols(), a.cols());
    return y;
}

Mat apply_kron_identity(const SpMat& a, Index inner, const Mat& x) {
    if (x.rows() != a.cols() * inner)
        throw std::invalid_argument("apply_kron_identity: dimension mismatch");
    Mat y(a.rows() * inner, x.cols());
    const SpMat at = a.transpose();
    for (Index c = 0; c < x.cols(); ++c) {
        Eigen::Map<const Mat> xc(x.col(c).data(), inner, a.cols());
        Mat yc = xc * at;
        y.col(c) = Eigen::Map<const Vec>(yc.data(), yc.size());
    }
    return y;
}

}  // namespace subprod
