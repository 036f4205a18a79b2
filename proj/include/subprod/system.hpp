// system.hpp: finite-dimensional standard subproduct systems over C.
//
// A system with letter space E = C^d is stored level by level up to its
// truncation N. Level n carries an orthonormal basis B_n (d^n x r_n, sparse)
// of the fiber X(n) inside E^{(x)n}; multi-indices are ordered
// lexicographically, so e_{a1} (x) ... (x) e_{an} sits at a1*d^{n-1}+...+an.
// The projection p_n is B_n B_n^*, unless the system was built from explicit
// projections, in which case the matrices given are kept verbatim for
// validation and shift construction.

#pragma once

#include "subprod/linalg.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace subprod {

enum class SystemKind { full, symmetric, q_commuting, ideal, explicit_projections };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

// A homogeneous element of the tensor algebra, coordinates in E^{(x)degree}.
struct Generator {
    int degree = 0;
    Vec coords;
};

struct BuildOptions {
    // Largest ambient dimension d^N materialized (sparse fibers).
    std::int64_t capacity = std::int64_t{1} << 20;
    // Largest ambient dimension for constructions that need dense SVDs
    // (ideal, q-commuting, explicit).
    std::int64_t dense_capacity = 4096;
    // QR pivots below rank_cutoff * largest are treated as zero.
    double rank_cutoff = 1e-9;
};

class SubproductSystem {
public:
    struct Fiber {
        Index ambient = 1;
        SpMat basis;                    // ambient x rank, orthonormal columns
        std::optional<Mat> projection;  // explicit p_n, if supplied
    };

    SubproductSystem(int d, int N, SystemKind kind, std::vector<Fiber> fibers,
                     std::vector<Generator> generators = {});

    int dim() const { return d_; }
    int truncation() const { return N_; }
    SystemKind kind() const { return kind_; }
    const std::vector<Generator>& generators() const { return generators_; }

    Index rank(int n) const;
    Index ambient_dim(int n) const;
    std::vector<Index> level_dims() const;

    const SpMat& basis(int n) const;
    bool has_explicit_projection(int n) const;

    // Dense p_n (explicit matrix if supplied, B_n B_n^* otherwise).
    Mat projection(int n) const;
    // p_n applied to the columns of x (rows(x) = d^n) without forming p_n.
    Mat apply_projection(int n, const Mat& x) const;

    // J_{n,m} = (B_n (x) B_m)^* B_{n+m}: coordinates of X(n+m) inside
    // X(n) (x) X(m). Size (r_n r_m) x r_{n+m}.
    SpMat embedding(int n, int m) const;
    // Cached J_{n,1}, n + 1 <= N.
    const SpMat& step_embedding(int n) const;

private:
    void check_level(int n) const;

    int d_;
    int N_;
    SystemKind kind_;
    std::vector<Fiber> fibers_;
    std::vector<Generator> generators_;
    std::vector<SpMat> step_embeddings_;
};

using SystemPtr = std::shared_ptr<const SubproductSystem>;

// Product system: X(n) = E^{(x)n}.
SystemPtr build_full(int d, int N, const BuildOptions& opts = {});
// Symmetric tensor powers; fiber basis = normalized orbit sums, one column per
// multiset of letters, ordered by the lexicographically smallest member.
SystemPtr build_symmetric(int d, int N, const BuildOptions& opts = {});
// X(n) = Y(n)^perp with Y(n) the span of u (x) g (x) v over generators g.
SystemPtr build_from_ideal(int d, const std::vector<Generator>& generators, int N,
                           const BuildOptions& opts = {});
// Generators e_i (x) e_j - q(i,j) e_j (x) e_i for i < j.
SystemPtr build_q_commuting(int d, const Mat& q, int N, const BuildOptions& opts = {});
// projections[n] is p_n (d^n x d^n); projections[0] must be [1], N = size-1.
SystemPtr build_explicit(int d, const std::vector<Mat>& projections,
                         const BuildOptions& opts = {});

struct ValidationReport {
    double hermitian_residual = 0.0;
    double idempotent_residual = 0.0;
    double basis_residual = 0.0;         // max ||B*B - I||, ||BB* - p||
    double compatibility_residual = 0.0;  // max over n+m <= N, both sides
    std::vector<double> level_compatibility;  // per target level n+m
    bool exact_norms = true;  // false if a Frobenius bound stood in for a norm
    bool verdict = false;
};

ValidationReport validate_system(const SubproductSystem& sys, double tol_proj = 1e-9);

// Graded bookkeeping for the truncated Fock space (+)_{n<=N} X(n).
struct TruncatedFock {
    int N = 0;
    std::vector<Index> level_dims;
    std::vector<Index> offsets;
    Index total_dim = 0;

    TruncatedFock() = default;
    TruncatedFock(const SubproductSystem& sys, int N);
    // Level owning a coordinate.
    int level_of(Index coord) const;
};

// Coordinates of p_{n+m}(x (x) y) in X(n+m) for x (x) y in X(n) (x) X(m):
// J_{n,m}^* for basis-defined levels, B_{n+m}^* p_{n+m} (B_n (x) B_m) when
// level n+m carries an explicit projection. Size r_{n+m} x (r_n r_m).
SpMat projected_product(const SubproductSystem& sys, int n, int m);

// Block of S_n(zeta) from level m to level n+m in fiber coordinates.
Mat shift_block(const SubproductSystem& sys, int n, const Vec& zeta, int m);

// S_n(zeta) compressed to the truncated Fock space of depth N (default: the
// system truncation). zeta in fiber coordinates of X(n).
SpMat shift_matrix(const SubproductSystem& sys, int n, const Vec& zeta, int N = -1);

// W_lambda = (+)_n lambda^n I_{X(n)}.
SpMat gauge_unitary(const SubproductSystem& sys, cd lambda, int N = -1);

// Block-diagonal of the B_n: F_X^{(N)} -> F(E)^{(N)}.
SpMat fock_embedding(const SubproductSystem& sys, int N = -1);

// Unit vector e_{i} (x) ... in lexicographic coordinates.
Vec basis_tensor(int d, const std::vector<int>& letters);

}  // namespace subprod
