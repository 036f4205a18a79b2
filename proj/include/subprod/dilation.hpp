// dilation.hpp: dilation (S (x) I_D) (+) Z of a contractive representation,
// the Wold split of relatively isometric ones, and finite-level data of the
// inductive limit attached to fully coisometric ones.

#pragma once

#include "subprod/structure.hpp"

#include <vector>

namespace subprod {

struct DilationOptions {
    double tol = 1e-8;        // residual verdicts
    double tol_limit = 1e-9;  // stopping rule of limit_Q
    int n_cap = 64;
    double q_cutoff = 1e-9;   // relative spectral cutoff defining U
};

struct DilationResult {
    int N = 0;
    PoissonKernel kernel;
    Mat Q;
    Mat U_basis;             // h x r_U
    Mat Y;                   // r_U x h
    Mat Y_pinv;              // h x r_U
    std::vector<Mat> Z_tilde;  // n = 0..N, each r_U x (r_n r_U)
    Mat W;                   // (D_N r_D + r_U) x h
    Index r_U = 0;
    Index r_D = 0;

    double truncation_defect = 0.0;     // ||T~_{N+1}T~_{N+1}^* - Q||
    double isometry_residual = 0.0;     // ||W*W - I||
    std::vector<double> coisometry_residuals;  // ||Z~_n Z~_n^* - I_U||
    double covariance_residual = 0.0;   // Z~_{n+m}(J (x) I) vs Z~_n (I (x) Z~_m)
    double intertwining_residual = 0.0; // Z_n(zeta)^* Y - Y T_n(zeta)^*
    double dilation_residual = 0.0;     // V_n(zeta)^* W - W T_n(zeta)^*, exactness levels
    double v_coisometry_defect = 0.0;   // ||V~_1 V~_1^* - I||
    bool verdict = false;

    // Z_n(zeta) on U.
    Mat z_op(const SubproductSystem& sys, int n, const Vec& zeta) const;
    // V_n(zeta) = (S_n(zeta) (x) I_D) (+) Z_n(zeta).
    Mat v_op(const SubproductSystem& sys, int n, const Vec& zeta) const;
    // Rows of W belonging to the Fock part, level by level, and the U part.
    Index fock_rows() const { return kernel.fock.total_dim * r_D; }
};

DilationResult dilate(const RepTuple& rep, int N = -1, const DilationOptions& opts = {});

struct WoldResult {
    DilationResult dilation;
    bool w_unitary = false;
    double unitary_residual = 0.0;
    double truncation_defect = 0.0;
    Index induced_dim = 0;        // dim of F_X^{(N)} (x) D
    Index coisometric_dim = 0;    // r_U
    std::vector<Mat> Z;           // Z_i = Z_1(e_i), r_U x r_U
    Mat defect_basis;
    double reconstruction_residual = 0.0;
    RelativeIsometryReport relative_isometry;
};

// Throws PreconditionError when the tuple is not relatively isometric up to N
// or W fails to be unitary at truncation N.
WoldResult wold(const RepTuple& rep, int N = -1, const DilationOptions& opts = {});

// u_{n,l} = (p_l (x) I)(I_{X(n)} (x) T~_{l-n}^*): X(n) (x) H -> X(l) (x) H.
Mat u_map(const RepTuple& rep, int n, int ell);

struct GramReport {
    int n = 0, m = 0;
    std::vector<int> ell;
    std::vector<cd> g;
    std::vector<double> increments;   // |g_l - g_{l-1}|
    double composition_residual = 0.0;
    bool fully_coisometric = false;
};

GramReport inductive_gram(const RepTuple& rep, int n, const Vec& x, int m, const Vec& y, int ell_max,
                          double tol = 1e-8);

struct WeakVNSample {
    int n = 0, m = 0;
    Vec zeta, xi;
};

struct WeakVNResult {
    double lhs = 0.0;              // ||V_n(zeta)^* V_m(xi)||
    double lhs_t = 0.0;            // ||T_n(zeta)^* T_m(xi)||
    std::vector<double> rhs_trend; // ||S_n(zeta)^* S_m(xi)|| at depth max(n,m)..N
    double rhs = 0.0;
    bool verified = false;
};

struct WeakVNReport {
    std::vector<WeakVNResult> samples;
    bool all_verified = false;
};

WeakVNReport weak_vn_check(const RepTuple& rep, int N, const std::vector<WeakVNSample>& samples,
                           double slack = 1e-6, const DilationOptions& opts = {});

}  // namespace subprod
