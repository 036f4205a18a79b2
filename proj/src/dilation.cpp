#include "subprod/dilation.hpp"

#include "subprod/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>

namespace subprod {

namespace {

// Phi^{2^k}(I) by squaring the matrix of Phi on vec(X), until the iterate
// stalls. Once steps are small, a growing step means roundoff drifting along
// unimodular eigenvalues, and the previous iterate is kept.
Mat polished_limit(const RepTuple& rep) {
    const Index h = rep.h();
    Mat super = Mat::Zero(h * h, h * h);
    for (const auto& t : rep.ops()) super += Eigen::kroneckerProduct(t.conjugate(), t);
    const Mat id = Mat::Identity(h, h);
    const Vec vec_id = Eigen::Map<const Vec>(id.data(), h * h);
    Vec current = super * vec_id;
    double last_step = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 24; ++k) {
        super = super * super;
        const Vec next = super * vec_id;
        const double scale = std::max(1.0, current.norm());
        const double step = (next - current).norm();
        if (last_step <= 1e-8 * scale && step >= last_step) break;
        if (next.norm() > current.norm() * (1.0 + 1e-12) + 1e-15) break;
        current = next;
        last_step = step;
        if (step <= 1e-15 * scale) break;
    }
    return hermitian_part(Mat(Eigen::Map<const Mat>(current.data(), h, h)));
}

// Shift block of the k-th fiber basis vector, read off projected product
// coordinates: columns k*r_m .. (k+1)*r_m - 1.
Mat basis_shift_block(const SpMat& coords, Index k, Index r_m) {
    return Mat(coords.middleCols(k * r_m, r_m));
}

}  // namespace

Mat DilationResult::z_op(const SubproductSystem& sys, int n, const Vec& zeta) const {
    if (n < 0 || n > N) throw InputError("z_op: level outside 0..N");
    if (zeta.size() != sys.rank(n)) throw InputError("z_op: zeta length mismatch");
    Mat out = Mat::Zero(r_U, r_U);
    for (Index i = 0; i < zeta.size(); ++i)
        if (zeta(i) != cd(0.0)) out += zeta(i) * Z_tilde[n].middleCols(i * r_U, r_U);
    return out;
}

Mat DilationResult::v_op(const SubproductSystem& sys, int n, const Vec& zeta) const {
    const Index fr = fock_rows();
    Mat v = Mat::Zero(fr + r_U, fr + r_U);
    if (r_D > 0) {
        const SpMat s = shift_matrix(sys, n, zeta, N);
        v.topLeftCorner(fr, fr) = Mat(sparse_kron(s, sparse_identity(r_D)));
    }
    if (r_U > 0) v.bottomRightCorner(r_U, r_U) = z_op(sys, n, zeta);
    return v;
}

DilationResult dilate(const RepTuple& rep, int N, const DilationOptions& opts) {
    const auto& sys = rep.system();
    if (N < 0) N = sys.truncation();
    if (N < 1 || N > sys.truncation()) throw InputError("dilation truncation must lie in 1..N");
    if (!covariance_holds(rep, opts.tol))
        throw PreconditionError("dilation needs a valid representation (covariance residual above tolerance)");
    const LimitQ lim = limit_Q(rep, opts.tol_limit, opts.n_cap);
    if (!lim.converged)
        throw PreconditionError("limit of T~_n T~_n^* did not converge within " + std::to_string(opts.n_cap) +
                                " steps (last step " + std::to_string(lim.final_step) + ")");
    const Index h = rep.h();

    DilationResult out;
    out.N = N;
    out.kernel = poisson_kernel(rep, N, opts.tol);
    out.r_D = out.kernel.defect.rank;

    const Mat q_raw = h <= 40 ? polished_limit(rep) : lim.Q;
    const auto sp = hermitian_eig(q_raw);
    const double top = sp.values.size() ? sp.values.maxCoeff() : 0.0;
    std::vector<Index> keep;
    for (Index k = sp.values.size() - 1; k >= 0; --k)
        if (top > 1e-12 && sp.values(k) > opts.q_cutoff * top) keep.push_back(k);
    out.r_U = static_cast<Index>(keep.size());
    out.U_basis = Mat(h, out.r_U);
    RVec roots(out.r_U);
    for (Index c = 0; c < out.r_U; ++c) {
        out.U_basis.col(c) = sp.vectors.col(keep[c]);
        roots(c) = std::sqrt(sp.values(keep[c]));
    }
    out.Q = out.U_basis * roots.cwiseAbs2().cast<cd>().asDiagonal() * out.U_basis.adjoint();
    out.Y = roots.cast<cd>().asDiagonal() * out.U_basis.adjoint();
    out.Y_pinv = out.U_basis * roots.cwiseInverse().cast<cd>().asDiagonal();

    // Z~_n = Lambda_n^*, Lambda_n = (I (x) Y) T~_n^* Y^+.
    const auto adj = t_tilde_adjoints(rep, N);
    for (int n = 0; n <= N; ++n) {
        const Mat lambda = apply_left_identity_kron(sys.rank(n), out.Y, adj[n]) * out.Y_pinv;
        out.Z_tilde.push_back(lambda.adjoint());
        const Mat zz = out.Z_tilde.back() * out.Z_tilde.back().adjoint();
        out.coisometry_residuals.push_back(op_norm(Mat(zz - Mat::Identity(out.r_U, out.r_U))));
    }

    for (int n = 1; n <= N; ++n)
        for (int m = 1; n + m <= N; ++m) {
            if (out.r_U == 0) continue;
            const SpMat coords = projected_product(sys, n, m);
            const Mat lhs = apply_kron_identity(SpMat(coords.adjoint()), out.r_U, out.Z_tilde[n + m].adjoint());
            const Mat rhs = apply_left_identity_kron(sys.rank(n), out.Z_tilde[m].adjoint(), out.Z_tilde[n].adjoint());
            out.covariance_residual = std::max(out.covariance_residual, op_norm(Mat(lhs - rhs)));
        }

    out.W = Mat(out.fock_rows() + out.r_U, h);
    out.W.topRows(out.fock_rows()) = out.kernel.K;
    out.W.bottomRows(out.r_U) = out.Y;
    out.isometry_residual = op_norm(Mat(out.W.adjoint() * out.W - Mat::Identity(h, h)));
    out.truncation_defect = op_norm(Mat(row_gram_next(rep, N) - out.Q));

    const Index rd = out.r_D;
    for (int n = 1; n <= N; ++n) {
        const Index rn = sys.rank(n);
        std::vector<Mat> stacked(rn);
        std::vector<Mat> t_adj(rn);
        for (Index k = 0; k < rn; ++k) {
            const Vec zeta = Vec::Unit(rn, k);
            t_adj[k] = op_of_fiber(rep, n, zeta).adjoint();
            const Mat z_part = out.z_op(sys, n, zeta).adjoint() * out.Y - out.Y * t_adj[k];
            out.intertwining_residual = std::max(out.intertwining_residual, op_norm(z_part));
            stacked[k] = z_part;
        }
        if (rd > 0) {
            for (int m = 0; m + n <= N; ++m) {
                const SpMat coords = projected_product(sys, n, m);
                for (Index k = 0; k < rn; ++k) {
                    const Mat blk = basis_shift_block(coords, k, sys.rank(m));
                    const Mat lhs = apply_kron_identity(to_sparse(Mat(blk.adjoint())), rd, out.kernel.block(n + m));
                    const Mat piece = lhs - out.kernel.block(m) * t_adj[k];
                    Mat grown(stacked[k].rows() + piece.rows(), h);
                    grown << piece, stacked[k];
                    stacked[k] = std::move(grown);
                }
            }
        }
        for (const auto& s : stacked) out.dilation_residual = std::max(out.dilation_residual, op_norm(s));
    }

    double z_row = 0.0;
    if (out.r_U > 0) {
        Mat sum = Mat::Zero(out.r_U, out.r_U);
        for (Index i = 0; i < sys.rank(1); ++i) {
            const Mat z = out.z_op(sys, 1, Vec::Unit(sys.rank(1), i));
            sum += z * z.adjoint();
        }
        z_row = op_norm(Mat(sum - Mat::Identity(out.r_U, out.r_U)));
    }
    out.v_coisometry_defect = std::max(rd > 0 ? 1.0 : 0.0, z_row);

    const double worst_coiso =
        *std::max_element(out.coisometry_residuals.begin(), out.coisometry_residuals.end());
    out.verdict = worst_coiso <= opts.tol && out.covariance_residual <= opts.tol &&
                  out.intertwining_residual <= opts.tol && out.dilation_residual <= opts.tol &&
                  out.isometry_residual <= opts.tol + out.truncation_defect;
    return out;
}

WoldResult wold(const RepTuple& rep, int N, const DilationOptions& opts) {
    const auto& sys = rep.system();
    if (N < 0) N = sys.truncation();
    WoldResult out;
    out.relative_isometry = relative_isometry_check(rep, N, opts.tol);
    if (!out.relative_isometry.verdict)
        throw PreconditionError("representation is not relatively isometric (first failing level " +
                                std::to_string(out.relative_isometry.failing_level) + ")");
    out.dilation = dilate(rep, N, opts);
    const DilationResult& dil = out.dilation;
    const Index h = rep.h();
    out.truncation_defect = dil.truncation_defect;
    out.induced_dim = dil.fock_rows();
    out.coisometric_dim = dil.r_U;
    out.defect_basis = dil.kernel.defect.defect_basis;
    out.unitary_residual = std::max(dil.isometry_residual, dil.W.rows() != h ? 1.0 : 0.0);
    out.w_unitary = out.unitary_residual <= opts.tol;
    if (!out.w_unitary)
        throw PreconditionError("W is not unitary at truncation " + std::to_string(N) + " (defect " +
                                std::to_string(out.unitary_residual) + ", truncation part " +
                                std::to_string(out.truncation_defect) + "); try a larger truncation");
    for (int i = 0; i < rep.d(); ++i) out.Z.push_back(dil.z_op(sys, 1, Vec::Unit(sys.rank(1), i)));

    const Index rd = dil.r_D;
    for (int n = 1; n <= N; ++n) {
        const Index cols_fock = dil.kernel.fock.offsets[N - n] * rd + sys.rank(N - n) * rd;
        for (Index k = 0; k < sys.rank(n); ++k) {
            const Vec zeta = Vec::Unit(sys.rank(n), k);
            const Mat conj = dil.W * op_of_fiber(rep, n, zeta) * dil.W.adjoint();
            const Mat diff = conj - dil.v_op(sys, n, zeta);
            Mat exact(diff.rows(), cols_fock + dil.r_U);
            exact << diff.leftCols(cols_fock), diff.rightCols(dil.r_U);
            out.reconstruction_residual = std::max(out.reconstruction_residual, op_norm(exact));
        }
    }
    return out;
}

Mat u_map(const RepTuple& rep, int n, int ell) {
    const auto& sys = rep.system();
    if (n < 0 || ell < n || ell > sys.truncation()) throw InputError("u_map needs 0 <= n <= ell <= N");
    const Index h = rep.h();
    const int k = ell - n;
    const Mat adj = t_tilde_adjoints(rep, k).back();
    const Mat lift = apply_left_identity_kron(sys.rank(n), adj, Mat::Identity(sys.rank(n) * h, sys.rank(n) * h));
    return apply_kron_identity(projected_product(sys, n, k), h, lift);
}

GramReport inductive_gram(const RepTuple& rep, int n, const Vec& x, int m, const Vec& y, int ell_max, double tol) {
    const auto& sys = rep.system();
    const Index h = rep.h();
    if (x.size() != sys.rank(n) * h || y.size() != sys.rank(m) * h)
        throw InputError("inductive_gram: vectors must lie in X(n) (x) H and X(m) (x) H");
    if (ell_max > sys.truncation()) throw InputError("inductive_gram: ell_max beyond truncation");
    GramReport out;
    out.n = n;
    out.m = m;
    out.fully_coisometric = classify(rep, tol, 1).fully_coisometric;
    for (int ell = std::max(n, m); ell <= ell_max; ++ell) {
        const Vec ux = u_map(rep, n, ell) * x;
        const Vec uy = u_map(rep, m, ell) * y;
        out.ell.push_back(ell);
        out.g.push_back(uy.dot(ux));
        if (out.g.size() > 1) out.increments.push_back(std::abs(out.g.back() - out.g[out.g.size() - 2]));
    }
    for (int start : {n, m})
        for (int mid = start; mid <= ell_max; ++mid) {
            const Mat composed = u_map(rep, mid, ell_max) * u_map(rep, start, mid);
            out.composition_residual =
                std::max(out.composition_residual, op_norm(Mat(composed - u_map(rep, start, ell_max))));
        }
    return out;
}

WeakVNReport weak_vn_check(const RepTuple& rep, int N, const std::vector<WeakVNSample>& samples, double slack,
                           const DilationOptions& opts) {
    const auto& sys = rep.system();
    if (N < 0) N = sys.truncation();
    const DilationResult dil = dilate(rep, N, opts);
    WeakVNReport out;
    out.all_verified = true;
    for (const auto& s : samples) {
        if (std::max(s.n, s.m) > N) throw InputError("weak_vn_check: sample level beyond truncation");
        WeakVNResult r;
        for (int depth = std::max(s.n, s.m); depth <= N; ++depth) {
            const SpMat prod = SpMat(shift_matrix(sys, s.n, s.zeta, depth).adjoint()) * shift_matrix(sys, s.m, s.xi, depth);
            r.rhs_trend.push_back(op_norm(prod));
        }
        r.rhs = r.rhs_trend.back();
        double lhs = dil.r_D > 0 ? r.rhs : 0.0;
        if (dil.r_U > 0)
            lhs = std::max(lhs, op_norm(Mat(dil.z_op(sys, s.n, s.zeta).adjoint() * dil.z_op(sys, s.m, s.xi))));
        r.lhs = lhs;
        r.lhs_t = op_norm(Mat(op_of_fiber(rep, s.n, s.zeta).adjoint() * op_of_fiber(rep, s.m, s.xi)));
        r.verified = r.lhs <= r.rhs + slack;
        out.all_verified = out.all_verified && r.verified;
        out.samples.push_back(std::move(r));
    }
    return out;
}

}  // namespace subprod
