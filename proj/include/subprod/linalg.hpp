// linalg.hpp: dense/sparse complex types and the small set of spectral helpers
// every module leans on (operator norms, Hermitian roots, range bases, tensor
// reshapes in lexicographic multi-index order).

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <vector>

namespace subprod {

using cd = std::complex<double>;
using Index = Eigen::Index;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cd>;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Largest singular value, from the Gram matrix of the short side. Empty
// matrices have norm 0.
double op_norm(const Mat& a);
double op_norm(const SpMat& a);

// Largest eigenvalue of a Hermitian matrix (the input is symmetrized first).
double max_eigenvalue(const Mat& hermitian);
double min_eigenvalue(const Mat& hermitian);

struct HermitianSpectrum {
    RVec values;  // ascending
    Mat vectors;  // columns
};
HermitianSpectrum hermitian_eig(const Mat& hermitian);

// Square root of a positive semidefinite matrix. Eigenvalues at or below
// `floor` (including small negative roundoff) are clamped to zero.
Mat psd_sqrt(const Mat& psd, double floor = 0.0);

// Orthonormal basis of range(a) from a column-pivoted QR; pivots at or below
// rel_cutoff * (largest pivot) count as zero. Returns rows(a) x rank.
Mat range_basis(const Mat& a, double rel_cutoff = 1e-9);

// Orthonormal basis of range(a)^perp inside C^{rows(a)}.
Mat complement_basis(const Mat& a, double rel_cutoff = 1e-9);

// Moore-Penrose pseudo-inverse with a relative singular value cutoff.
Mat pseudo_inverse(const Mat& a, double rel_cutoff = 1e-9);

// d^n with overflow guard (returns -1 on overflow past int64 range).
std::int64_t int_pow(std::int64_t base, int exp);

SpMat sparse_identity(Index n);
SpMat to_sparse(const Mat& a, double drop = 0.0);
SpMat sparse_kron(const SpMat& a, const SpMat& b);

// (I_{outer} (x) A) applied blockwise: x has `outer` consecutive blocks of
// size cols(A) per column.
Mat apply_left_identity_kron(Index outer, const Mat& a, const Mat& x);

// (A (x) I_inner) x  for dense/sparse A, x with rows = cols(A) * inner.
Mat apply_kron_identity(const SpMat& a, Index inner, const Mat& x);

// Hermitian part, (a + a*)/2.
Mat hermitian_part(const Mat& a);

}  // namespace subprod
