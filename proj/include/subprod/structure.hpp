// structure.hpp: defect operator, the limit Q of T~_n T~_n^*, the Poisson
// kernel and the classification predicates built on them.

#pragma once

#include "subprod/representation.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace subprod {

struct DefectData {
    Mat delta_star;    // h x h, positive
    Mat defect_basis;  // h x r_D, orthonormal columns spanning range(delta_star)
    Index rank = 0;
};

// Throws ContractivityError when ||T~_1|| > 1 + tol.
DefectData defect(const RepTuple& rep, double tol = 1e-8);

struct LimitQ {
    Mat Q;
    int iterations = 0;
    bool converged = false;
    double final_step = 0.0;
    bool via_phi = true;         // iterated X -> Sum T_i X T_i^* (valid tuples)
    std::vector<double> norms;   // ||A_n|| for n = 0..iterations
};

// True when the tuple annihilates every ker p_n, judged on the levels that
// generate the relations (all levels for explicit systems).
bool covariance_holds(const RepTuple& rep, double tol = 1e-8);

// A_n = T~_n T~_n^* until ||A_{n+1} - A_n|| <= tol or n = n_cap.
LimitQ limit_Q(const RepTuple& rep, double tol = 1e-9, int n_cap = 64);

// Converged limit with ||Q|| <= tol, continuing X -> Phi(X) up to n_cap when
// the stopped iterate is still above tol.
bool purity_certified(const RepTuple& rep, const LimitQ& lim, double tol, int n_cap = 64);

bool is_pure(const RepTuple& rep, double tol = 1e-8, double tol_limit = 1e-9, int n_cap = 64);

// T~_{N+1} T~_{N+1}^*. Uses the system fiber when N + 1 <= truncation and
// T~_N (I (x) T~_1 T~_1^*) T~_N^* past it.
Mat row_gram_next(const RepTuple& rep, int N);

struct PoissonKernel {
    int N = 0;
    DefectData defect;
    TruncatedFock fock;
    // Rows: level n block has r_n * r_D rows, fiber index outer, defect inner.
    Mat K;
    std::vector<Index> row_offsets;

    Mat block(int n) const;
};

PoissonKernel poisson_kernel(const RepTuple& rep, int N = -1, double tol = 1e-8);

struct KernelIdentityReport {
    double telescoping = 0.0;    // ||K*K - (I - T~_{N+1}T~_{N+1}^*)||
    double intertwining = 0.0;   // max over n <= N/2, basis zeta, exactness levels
    std::vector<double> intertwining_by_level;
    double isometry_gap = 0.0;   // ||K*K - I||
    bool verdict = false;
};

KernelIdentityReport verify_kernel_identities(const RepTuple& rep, int N = -1, double tol = 1e-9,
                                              int max_shift_level = -1);

// K^* (A (x) I_D) K for A on the truncated Fock space of the kernel.
Mat psi_map(const PoissonKernel& kernel, const SpMat& a);
// Strict form: requires ||T~_1|| < 1.
Mat psi_map(const RepTuple& rep, int N, const SpMat& a);

RepTuple r_scale(const RepTuple& rep, double r);

// ||Psi(S_n(zeta) S_m(eta)^*) - T_n(zeta) T_m(eta)^*||.
double psi_product_residual(const RepTuple& rep, int N, int n, const Vec& zeta, int m, const Vec& eta);

struct RelativeIsometryLevel {
    int n = 0;
    double partial_isometry = 0.0;
    double operator_condition = 0.0;
    double subspace_condition = 0.0;
};

struct RelativeIsometryReport {
    std::vector<RelativeIsometryLevel> levels;
    bool partial_isometries = false;
    bool operator_verdict = false;
    bool subspace_verdict = false;
    bool verdict = false;
    bool forms_agree = true;
    int failing_level = -1;
};

RelativeIsometryReport relative_isometry_check(const RepTuple& rep, int up_to = -1, double tol = 1e-8);

struct CoisometricLimitReport {
    int m = 1;
    std::vector<int> ell;
    std::vector<double> a_ell;
    std::vector<double> gap;
    double target = 0.0;
    double alt_target = 0.0;
    double monotone_violation = 0.0;
    double min_gap = 0.0;
    bool monotone = false;
    bool bounded_below = false;
    bool converged = false;
    bool applicable = false;
};

// a_ell = ||(p_ell (x) I)(eta (x) T~_{ell-m}^* h)|| for ell = m..ell_max.
CoisometricLimitReport coisometric_limit_condition(const RepTuple& rep, int m, const Vec& eta, const Vec& h_vec,
                                                   int ell_max, double tol = 1e-8, double tol_limit = 1e-7);

struct SphericalReport {
    std::vector<double> normal_residuals;
    std::vector<double> commutator_residuals;
    double sum_residual = 0.0;
    bool symmetric_system = false;
    bool verdict = false;
};

SphericalReport spherical_check(const RepTuple& rep, double tol = 1e-8);

// Closed form of a_ell^2 for eta = e_p^{(x)m} on symmetric systems.
double symmetric_fastpath_norm_sq(const RepTuple& rep, int m, int p, const Vec& h_vec, int ell);
double symmetric_fastpath_norm(const RepTuple& rep, int m, int p, const Vec& h_vec, int ell);

// Sum over multisets c of size ell of (ell! / c!) ||(T^c)^* h||^2.
double symmetric_multinomial_norm_sq(const RepTuple& rep, const Vec& h_vec, int ell);

struct NonSphericalSearch {
    std::uint64_t seed = 0;
    int attempts = 0;
    int coisometric_candidates = 0;
    std::vector<std::vector<Mat>> found;
    double best_min_eigenvalue = 0.0;  // smallest eigenvalue of the normalized fixed point
    double best_normality_defect = 0.0;
};

// Seeded search for commuting, fully coisometric, non-normal d-tuples on C^h:
// commuting tuples are polynomials in one random matrix, made coisometric by
// the similarity that normalizes the Perron eigenvector of X -> Sum T_i X T_i^*.
NonSphericalSearch search_nonspherical_coisometric(int d, Index h, std::uint64_t seed, int attempts, int wanted,
                                                   double tol = 1e-8);

}  // namespace subprod
