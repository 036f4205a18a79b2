// representation.hpp: matrix tuples T_1..T_d as representations of a
// subproduct system, the fiber operators T_n(zeta) and the rows T~_n.

#pragma once

#include "subprod/system.hpp"

#include <vector>

namespace subprod {

class RepTuple {
public:
    RepTuple(SystemPtr system, std::vector<Mat> ops);

    const SubproductSystem& system() const { return *system_; }
    const SystemPtr& system_ptr() const { return system_; }
    int d() const { return static_cast<int>(ops_.size()); }
    Index h() const { return h_; }
    const Mat& op(int i) const { return ops_.at(i); }
    const std::vector<Mat>& ops() const { return ops_; }

private:
    SystemPtr system_;
    std::vector<Mat> ops_;
    Index h_;
};

// Columns vec(T_alpha), alpha in [d]^n lexicographic; h^2 x d^n.
Mat word_products(const RepTuple& rep, int n);

// Sum_alpha v_alpha T_alpha for an ambient vector v of length d^n.
Mat op_of_ambient(const RepTuple& rep, int n, const Vec& v);

// T_n(zeta) for zeta in fiber coordinates of X(n).
Mat op_of_fiber(const RepTuple& rep, int n, const Vec& zeta);

// T~_n = (T_n(b_1) ... T_n(b_{r_n})), assembled block by block.
Mat t_tilde(const RepTuple& rep, int n);

// T~_n^* through the recursion T~_{n+1}^* = (J_{n,1}^* (x) I)(I (x) T~_1^*) T~_n^*.
// Returns levels 0..up_to, each (r_n h) x h.
std::vector<Mat> t_tilde_adjoints(const RepTuple& rep, int up_to);

// T~_{n+1}^* from T~_n^* (one recursion step).
Mat next_t_tilde_adjoint(const RepTuple& rep, int n, const Mat& current);

// The other factorization, T~_{n+1}^* = (J_{1,n}^* (x) I)(I_E (x) T~_n^*) T~_1^*.
Mat t_tilde_adjoint_left(const RepTuple& rep, int n, const Mat& level_n_adjoint);

// Phi(X) = Sum_i T_i X T_i^*.
Mat phi(const RepTuple& rep, const Mat& x);

struct CovarianceReport {
    std::vector<double> residuals;  // index n, 0..up_to
    std::vector<bool> bounded;      // true where a Hilbert-Schmidt bound was used
    double max_residual = 0.0;
    bool verdict = false;
};

CovarianceReport check_representation(const RepTuple& rep, int up_to = -1, double tol = 1e-8);

struct RowNorm {
    double value = 0.0;
    bool completely_contractive = false;
};

RowNorm row_norm(const RepTuple& rep, double tol = 1e-8);

struct Classification {
    bool isometric = false;
    bool fully_coisometric = false;
    bool pure = false;
    bool limit_converged = false;
    int limit_iterations = 0;
    double isometric_residual = 0.0;
    double coisometric_residual = 0.0;
    double q_norm = 0.0;
    std::vector<int> partial_isometry_levels;
    std::vector<double> partial_isometry_residuals;
};

Classification classify(const RepTuple& rep, double tol = 1e-8, int n_max = -1, double tol_limit = 1e-9,
                        int n_cap = 64);

}  // namespace subprod
