#include "subprod/representation.hpp"

#include "subprod/errors.hpp"
#include "subprod/structure.hpp"

#include <algorithm>
#include <cmath>

namespace subprod {

namespace {

Mat unvec(const Vec& v, Index h) { return Eigen::Map<const Mat>(v.data(), h, h); }

// Orthonormal basis of ker p_n, or an empty optional when too large to form.
std::optional<Mat> kernel_basis(const SubproductSystem& sys, int n) {
    const Index amb = sys.ambient_dim(n);
    const Index r = sys.rank(n);
    if (r == amb) return Mat(amb, 0);
    if (sys.has_explicit_projection(n)) {
        const Mat p = sys.projection(n);
        return range_basis(Mat(Mat::Identity(amb, amb) - hermitian_part(p)));
    }
    if (static_cast<double>(amb) * amb * std::max<Index>(r, 1) > 2e10) return std::nullopt;
    Eigen::HouseholderQR<Mat> qr{Mat(sys.basis(n))};
    Mat q = qr.householderQ() * Mat::Identity(amb, amb);
    return Mat(q.rightCols(amb - r));
}

}  // namespace

RepTuple::RepTuple(SystemPtr system, std::vector<Mat> ops) : system_(std::move(system)), ops_(std::move(ops)) {
    if (!system_) throw InputError("representation needs a system");
    if (static_cast<int>(ops_.size()) != system_->dim())
        throw InputError("tuple has " + std::to_string(ops_.size()) + " operators, system has d = " +
                         std::to_string(system_->dim()));
    if (ops_.empty()) throw InputError("empty tuple");
    h_ = ops_.front().rows();
    if (h_ < 1) throw InputError("operators must be at least 1x1");
    for (const auto& t : ops_)
        if (t.rows() != h_ || t.cols() != h_) throw InputError("tuple operators must all be h x h");
}

Mat word_products(const RepTuple& rep, int n) {
    const Index h = rep.h();
    const int d = rep.d();
    Mat words(h * h, 1);
    words.col(0) = Eigen::Map<const Vec>(Mat(Mat::Identity(h, h)).data(), h * h);
    for (int level = 0; level < n; ++level) {
        Mat next(h * h, words.cols() * d);
        for (Index a = 0; a < words.cols(); ++a) {
            const Mat prefix = unvec(words.col(a), h);
            for (int j = 0; j < d; ++j) {
                const Mat w = prefix * rep.op(j);
                next.col(a * d + j) = Eigen::Map<const Vec>(w.data(), h * h);
            }
        }
        words = std::move(next);
    }
    return words;
}

Mat op_of_ambient(const RepTuple& rep, int n, const Vec& v) {
    const Index amb = int_pow(rep.d(), n);
    if (v.size() != amb) throw InputError("ambient vector has wrong length");
    const Index h = rep.h();
    if (n == 0) return v(0) * Mat::Identity(h, h);
    // Sum_{a1} T_{a1} (Sum over the remaining letters), skipping zero blocks.
    const Index block = amb / rep.d();
    Mat out = Mat::Zero(h, h);
    for (int a = 0; a < rep.d(); ++a) {
        const auto seg = v.segment(a * block, block);
        if (seg.isZero(0.0)) continue;
        out.noalias() += rep.op(a) * op_of_ambient(rep, n - 1, seg);
    }
    return out;
}

Mat op_of_fiber(const RepTuple& rep, int n, const Vec& zeta) {
    const auto& sys = rep.system();
    if (zeta.size() != sys.rank(n))
        throw InputError("zeta has length " + std::to_string(zeta.size()) + ", fiber X(" + std::to_string(n) +
                         ") has dimension " + std::to_string(sys.rank(n)));
    return op_of_ambient(rep, n, sys.basis(n) * zeta);
}

Mat t_tilde(const RepTuple& rep, int n) {
    const Index r = rep.system().rank(n);
    const Index h = rep.h();
    Mat row(h, r * h);
    for (Index i = 0; i < r; ++i) row.middleCols(i * h, h) = op_of_fiber(rep, n, Vec::Unit(r, i));
    return row;
}

Mat next_t_tilde_adjoint(const RepTuple& rep, int n, const Mat& current) {
    const auto& sys = rep.system();
    const Index h = rep.h();
    Mat t1_adj(rep.d() * h, h);
    for (int j = 0; j < rep.d(); ++j) t1_adj.middleRows(j * h, h) = rep.op(j).adjoint();
    const Mat lifted = apply_left_identity_kron(sys.rank(n), t1_adj, current);
    return apply_kron_identity(SpMat(sys.step_embedding(n).adjoint()), h, lifted);
}

std::vector<Mat> t_tilde_adjoints(const RepTuple& rep, int up_to) {
    if (up_to > rep.system().truncation()) throw InputError("level beyond system truncation");
    std::vector<Mat> out;
    out.push_back(Mat::Identity(rep.h(), rep.h()));
    for (int n = 0; n < up_to; ++n) out.push_back(next_t_tilde_adjoint(rep, n, out.back()));
    return out;
}

Mat t_tilde_adjoint_left(const RepTuple& rep, int n, const Mat& level_n_adjoint) {
    const auto& sys = rep.system();
    const Index h = rep.h();
    Mat t1_adj(rep.d() * h, h);
    for (int j = 0; j < rep.d(); ++j) t1_adj.middleRows(j * h, h) = rep.op(j).adjoint();
    const Mat lifted = apply_left_identity_kron(rep.d(), level_n_adjoint, t1_adj);
    return apply_kron_identity(SpMat(sys.embedding(1, n).adjoint()), h, lifted);
}

Mat phi(const RepTuple& rep, const Mat& x) {
    Mat out = Mat::Zero(rep.h(), rep.h());
    for (const auto& t : rep.ops()) out.noalias() += t * x * t.adjoint();
    return out;
}

CovarianceReport check_representation(const RepTuple& rep, int up_to, double tol) {
    const auto& sys = rep.system();
    if (up_to < 0) up_to = sys.truncation();
    if (up_to > sys.truncation()) throw InputError("check_representation: level beyond truncation");
    CovarianceReport out;
    const Index h = rep.h();
    for (int n = 0; n <= up_to; ++n) {
        double res = 0.0;
        bool bounded = false;
        if (sys.rank(n) < sys.ambient_dim(n)) {
            const Mat words = word_products(rep, n);
            if (auto ker = kernel_basis(sys, n)) {
                const Mat images = words * (*ker);
                for (Index c = 0; c < images.cols(); ++c) res = std::max(res, op_norm(unvec(images.col(c), h)));
            } else {
                // Norm of w -> vec(Sum w_a T_a) on ker p_n dominates every basis residual.
                const Mat b = Mat(sys.basis(n));
                const Mat off = words - (words * b) * b.adjoint();
                res = op_norm(off);
                bounded = true;
            }
        }
        out.residuals.push_back(res);
        out.bounded.push_back(bounded);
        out.max_residual = std::max(out.max_residual, res);
    }
    out.verdict = out.max_residual <= tol;
    return out;
}

RowNorm row_norm(const RepTuple& rep, double tol) {
    Mat a = Mat::Zero(rep.h(), rep.h());
    for (const auto& t : rep.ops()) a.noalias() += t * t.adjoint();
    RowNorm out;
    out.value = std::sqrt(std::max(0.0, max_eigenvalue(a)));
    out.completely_contractive = out.value <= 1.0 + tol;
    return out;
}

Classification classify(const RepTuple& rep, double tol, int n_max, double tol_limit, int n_cap) {
    const auto& sys = rep.system();
    const Index h = rep.h();
    const int d = rep.d();
    if (n_max < 0) n_max = std::min(sys.truncation(), 8);
    n_max = std::min(n_max, sys.truncation());
    Classification out;

    Mat row(h, d * h);
    for (int j = 0; j < d; ++j) row.middleCols(j * h, h) = rep.op(j);
    out.isometric_residual = op_norm(Mat(row.adjoint() * row - Mat::Identity(d * h, d * h)));
    out.coisometric_residual = op_norm(Mat(row * row.adjoint() - Mat::Identity(h, h)));
    out.isometric = out.isometric_residual <= tol;
    out.fully_coisometric = out.coisometric_residual <= tol;

    Mat adj = Mat::Identity(h, h);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) adj = next_t_tilde_adjoint(rep, n - 1, adj);
        const Mat a = adj.adjoint() * adj;
        const double res = op_norm(Mat(a * a - a));
        out.partial_isometry_residuals.push_back(res);
        if (res <= tol) out.partial_isometry_levels.push_back(n);
    }

    const LimitQ lim = limit_Q(rep, tol_limit, n_cap);
    out.limit_converged = lim.converged;
    out.limit_iterations = lim.iterations;
    out.q_norm = op_norm(lim.Q);
    out.pure = purity_certified(rep, lim, tol, n_cap);
    return out;
}

}  // namespace subprod
