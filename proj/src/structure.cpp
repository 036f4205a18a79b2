#include "subprod/structure.hpp"

#include "subprod/errors.hpp"
#include "subprod/random.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <functional>

namespace subprod {

namespace {

// Eigenvalues of I - T~_1 T~_1^* below this are roundoff on a coisometric part.
constexpr double kDefectFloor = 1e-13;

Mat row_of(const RepTuple& rep) {
    const Index h = rep.h();
    Mat row(h, rep.d() * h);
    for (int j = 0; j < rep.d(); ++j) row.middleCols(j * h, h) = rep.op(j);
    return row;
}

Mat block_diag_repeat(Index copies, const Mat& a) {
    Mat out = Mat::Zero(copies * a.rows(), copies * a.cols());
    for (Index k = 0; k < copies; ++k) out.block(k * a.rows(), k * a.cols(), a.rows(), a.cols()) = a;
    return out;
}

int relation_depth(const SubproductSystem& sys) {
    switch (sys.kind()) {
        case SystemKind::full: return 0;
        case SystemKind::symmetric: return std::min(2, sys.truncation());
        case SystemKind::q_commuting:
        case SystemKind::ideal: {
            int deg = 0;
            for (const auto& g : sys.generators()) deg = std::max(deg, g.degree);
            return std::min(deg, sys.truncation());
        }
        case SystemKind::explicit_projections: return sys.truncation();
    }
    return sys.truncation();
}

// Compositions of `total` into `parts` nonnegative integers, lexicographic.
void for_each_composition(int total, int parts, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> c(parts, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == parts - 1) {
            c[pos] = left;
            fn(c);
            return;
        }
        for (int v = left; v >= 0; --v) {
            c[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, total);
}

double multinomial(const std::vector<int>& c) {
    double out = 1.0;
    int acc = 0;
    for (int ci : c)
        for (int j = 1; j <= ci; ++j) {
            ++acc;
            out = out * acc / j;
        }
    return out;
}

Vec adjoint_power_apply(const RepTuple& rep, const std::vector<int>& c, const Vec& h_vec) {
    Vec w = h_vec;
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
        for (int k = 0; k < c[i]; ++k) w = rep.op(i).adjoint() * w;
    return w;
}

void require_commuting_symmetric(const RepTuple& rep) {
    if (rep.system().kind() != SystemKind::symmetric)
        throw PreconditionError("symmetric fast path needs a symmetric system");
    for (int i = 0; i < rep.d(); ++i)
        for (int j = i + 1; j < rep.d(); ++j)
            if (op_norm(Mat(rep.op(i) * rep.op(j) - rep.op(j) * rep.op(i))) > 1e-8)
                throw PreconditionError("symmetric fast path needs a commuting tuple");
}

}  // namespace

DefectData defect(const RepTuple& rep, double tol) {
    const RowNorm rn = row_norm(rep, tol);
    if (!rn.completely_contractive)
        throw ContractivityError("row norm " + std::to_string(rn.value) + " exceeds 1");
    const Index h = rep.h();
    const Mat row = row_of(rep);
    const auto sp = hermitian_eig(Mat(Mat::Identity(h, h) - row * row.adjoint()));
    RVec roots = sp.values.unaryExpr([](double v) { return v <= kDefectFloor ? 0.0 : std::sqrt(v); });
    DefectData out;
    out.delta_star = sp.vectors * roots.cast<cd>().asDiagonal() * sp.vectors.adjoint();
    const double top = roots.size() ? roots.maxCoeff() : 0.0;
    std::vector<Index> keep;
    for (Index k = roots.size() - 1; k >= 0; --k)
        if (top > 0.0 && roots(k) > 1e-9 * top) keep.push_back(k);
    out.defect_basis = Mat(h, static_cast<Index>(keep.size()));
    for (Index c = 0; c < static_cast<Index>(keep.size()); ++c) out.defect_basis.col(c) = sp.vectors.col(keep[c]);
    out.rank = static_cast<Index>(keep.size());
    return out;
}

bool covariance_holds(const RepTuple& rep, double tol) {
    const int depth = relation_depth(rep.system());
    if (depth < 2) return true;
    return check_representation(rep, depth, tol).verdict;
}

LimitQ limit_Q(const RepTuple& rep, double tol, int n_cap) {
    const Index h = rep.h();
    LimitQ out;
    out.via_phi = covariance_holds(rep);
    Mat a = Mat::Identity(h, h);
    Mat adj = Mat::Identity(h, h);
    out.norms.push_back(1.0);
    const int cap = out.via_phi ? n_cap : std::min(n_cap, rep.system().truncation());
    for (int n = 0; n < cap; ++n) {
        Mat next;
        if (out.via_phi) {
            next = phi(rep, a);
        } else {
            adj = next_t_tilde_adjoint(rep, n, adj);
            next = adj.adjoint() * adj;
        }
        out.final_step = op_norm(Mat(next - a));
        a = hermitian_part(next);
        out.iterations = n + 1;
        out.norms.push_back(op_norm(a));
        if (out.final_step <= tol) {
            out.converged = true;
            break;
        }
    }
    out.Q = a;
    return out;
}

bool purity_certified(const RepTuple& rep, const LimitQ& lim, double tol, int n_cap) {
    if (!lim.converged) return false;
    double norm = op_norm(lim.Q);
    if (norm <= tol || !lim.via_phi) return norm <= tol;
    // A_n decreases, so ||A_n|| <= tol bounds ||Q|| as well.
    Mat a = lim.Q;
    for (int n = lim.iterations; n < n_cap && norm > tol; ++n) {
        a = hermitian_part(phi(rep, a));
        norm = op_norm(a);
    }
    return norm <= tol;
}

bool is_pure(const RepTuple& rep, double tol, double tol_limit, int n_cap) {
    return purity_certified(rep, limit_Q(rep, tol_limit, n_cap), tol, n_cap);
}

Mat row_gram_next(const RepTuple& rep, int N) {
    const auto& sys = rep.system();
    const Index h = rep.h();
    const auto adj = t_tilde_adjoints(rep, N);
    if (N + 1 <= sys.truncation()) {
        const Mat next = next_t_tilde_adjoint(rep, N, adj.back());
        return next.adjoint() * next;
    }
    const Mat row = row_of(rep);
    const Mat a1 = row * row.adjoint();
    const Mat& top = adj.back();
    Mat out = Mat::Zero(h, h);
    for (Index i = 0; i < sys.rank(N); ++i) {
        const auto blk = top.middleRows(i * h, h);
        out.noalias() += blk.adjoint() * a1 * blk;
    }
    return out;
}

Mat PoissonKernel::block(int n) const {
    const Index rows = fock.level_dims.at(n) * defect.rank;
    return K.middleRows(row_offsets.at(n), rows);
}

PoissonKernel poisson_kernel(const RepTuple& rep, int N, double tol) {
    const auto& sys = rep.system();
    if (N < 0) N = sys.truncation();
    if (N > sys.truncation()) throw InputError("kernel truncation exceeds system truncation");
    PoissonKernel pk;
    pk.N = N;
    pk.defect = defect(rep, tol);
    pk.fock = TruncatedFock(sys, N);
    const Index rd = pk.defect.rank;
    const Mat compress = pk.defect.defect_basis.adjoint() * pk.defect.delta_star;  // r_D x h
    pk.K = Mat::Zero(pk.fock.total_dim * rd, rep.h());
    const auto adj = t_tilde_adjoints(rep, N);
    for (int n = 0; n <= N; ++n) {
        pk.row_offsets.push_back(pk.fock.offsets[n] * rd);
        if (rd == 0) continue;
        pk.K.middleRows(pk.fock.offsets[n] * rd, sys.rank(n) * rd) =
            apply_left_identity_kron(sys.rank(n), compress, adj[n]);
    }
    return pk;
}

KernelIdentityReport verify_kernel_identities(const RepTuple& rep, int N, double tol, int max_shift_level) {
    const auto& sys = rep.system();
    if (N < 0) N = sys.truncation();
    const Index h = rep.h();
    const PoissonKernel pk = poisson_kernel(rep, N);
    const Index rd = pk.defect.rank;
    KernelIdentityReport out;
    const Mat kk = pk.K.adjoint() * pk.K;
    const Mat tail = row_gram_next(rep, N);
    out.telescoping = op_norm(Mat(kk - (Mat::Identity(h, h) - tail)));
    out.isometry_gap = op_norm(Mat(kk - Mat::Identity(h, h)));

    if (max_shift_level < 0) max_shift_level = N / 2;
    max_shift_level = std::min(max_shift_level, N);
    out.intertwining_by_level.assign(max_shift_level + 1, 0.0);
    for (int n = 1; n <= max_shift_level; ++n) {
        double worst = 0.0;
        for (Index k = 0; k < sys.rank(n); ++k) {
            const Vec zeta = Vec::Unit(sys.rank(n), k);
            const Mat tz = op_of_fiber(rep, n, zeta);
            Mat diff(h, 0);
            for (int m = 0; m + n <= N; ++m) {
                const Index cols = sys.rank(m) * rd;
                Mat piece = -tz * pk.block(m).adjoint();
                if (rd > 0) {
                    const SpMat blk_adj = to_sparse(Mat(shift_block(sys, n, zeta, m).adjoint()));
                    piece += apply_kron_identity(blk_adj, rd, pk.block(n + m)).adjoint();
                }
                diff.conservativeResize(h, diff.cols() + cols);
                diff.rightCols(cols) = piece;
            }
            worst = std::max(worst, op_norm(diff));
        }
        out.intertwining_by_level[n] = worst;
        out.intertwining = std::max(out.intertwining, worst);
    }
    out.verdict = out.telescoping <= tol && out.intertwining <= tol;
    return out;
}

Mat psi_map(const PoissonKernel& kernel, const SpMat& a) {
    if (a.rows() != kernel.fock.total_dim || a.cols() != kernel.fock.total_dim)
        throw InputError("psi_map: operator size does not match the truncated Fock space");
    const Index rd = kernel.defect.rank;
    const Index h = kernel.K.cols();
    if (rd == 0) return Mat::Zero(h, h);
    return kernel.K.adjoint() * apply_kron_identity(a, rd, kernel.K);
}

Mat psi_map(const RepTuple& rep, int N, const SpMat& a) {
    const RowNorm rn = row_norm(rep);
    if (rn.value >= 1.0)
        throw ContractivityError("psi_map needs a strict row contraction (row norm " + std::to_string(rn.value) +
                                 "); rescale with r_scale first");
    return psi_map(poisson_kernel(rep, N), a);
}

RepTuple r_scale(const RepTuple& rep, double r) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("r_scale needs 0 < r < 1");
    std::vector<Mat> ops = rep.ops();
    for (auto& t : ops) t *= r;
    return RepTuple(rep.system_ptr(), std::move(ops));
}

double psi_product_residual(const RepTuple& rep, int N, int n, const Vec& zeta, int m, const Vec& eta) {
    const auto& sys = rep.system();
    const SpMat a = shift_matrix(sys, n, zeta, N) * SpMat(shift_matrix(sys, m, eta, N).adjoint());
    const Mat psi = psi_map(rep, N, a);
    const Mat expect = op_of_fiber(rep, n, zeta) * op_of_fiber(rep, m, eta).adjoint();
    return op_norm(Mat(psi - expect));
}

RelativeIsometryReport relative_isometry_check(const RepTuple& rep, int up_to, double tol) {
    const auto& sys = rep.system();
    if (up_to < 0) up_to = std::min(sys.truncation(), 6);
    if (up_to > sys.truncation()) throw InputError("relative_isometry_check: level beyond truncation");
    const Index h = rep.h();
    const DefectData def = defect(rep, tol);
    RelativeIsometryReport out;
    out.partial_isometries = true;
    bool op_ok = true, sub_ok = true;
    Mat adj = Mat::Identity(h, h);
    for (int n = 0; n <= up_to; ++n) {
        if (n > 0) adj = next_t_tilde_adjoint(rep, n - 1, adj);
        const Index dim = sys.rank(n) * h;
        if (dim > 4096) throw CapacityError("relative isometry check at level " + std::to_string(n) + " too large");
        RelativeIsometryLevel lv;
        lv.n = n;
        const Mat a = adj.adjoint() * adj;
        lv.partial_isometry = op_norm(Mat(a * a - a));
        const Mat g = adj * adj.adjoint();  // T~_n^* T~_n
        const Mat p = block_diag_repeat(sys.rank(n), def.delta_star);
        lv.operator_condition = op_norm(Mat(p * g * p - p));
        lv.subspace_condition = op_norm(Mat(p - g * p));
        const bool pi = lv.partial_isometry <= tol;
        const bool oc = lv.operator_condition <= tol;
        const bool sc = lv.subspace_condition <= tol;
        out.partial_isometries = out.partial_isometries && pi;
        op_ok = op_ok && oc;
        sub_ok = sub_ok && sc;
        if (out.failing_level < 0 && !(pi && oc && sc)) out.failing_level = n;
        out.levels.push_back(lv);
    }
    out.operator_verdict = out.partial_isometries && op_ok;
    out.subspace_verdict = out.partial_isometries && sub_ok;
    out.verdict = out.operator_verdict && out.subspace_verdict;
    out.forms_agree = !out.partial_isometries || (op_ok == sub_ok);
    return out;
}

CoisometricLimitReport coisometric_limit_condition(const RepTuple& rep, int m, const Vec& eta, const Vec& h_vec,
                                                   int ell_max, double tol, double tol_limit) {
    const auto& sys = rep.system();
    const Index h = rep.h();
    if (m < 1) throw InputError("coisometric limit condition needs m >= 1");
    if (ell_max > sys.truncation() || ell_max < m) throw InputError("ell_max must lie in m..N");
    if (eta.size() != sys.rank(m)) throw InputError("eta length does not match X(m)");
    if (h_vec.size() != h) throw InputError("h vector length does not match the representation");

    CoisometricLimitReport out;
    out.m = m;
    out.applicable = classify(rep, tol, 1).fully_coisometric;
    const Mat tm = op_of_fiber(rep, m, eta);
    out.target = (tm * h_vec).norm();
    out.alt_target = (tm.adjoint() * h_vec).norm();

    Mat v = h_vec;  // T~_k^* h, fiber coordinates
    for (int ell = m; ell <= ell_max; ++ell) {
        const int k = ell - m;
        if (k > 0) v = next_t_tilde_adjoint(rep, k - 1, v);
        double a = 0.0;
        if (sys.has_explicit_projection(ell)) {
            const Vec amb_eta = sys.basis(m) * eta;
            const Mat amb_v = apply_kron_identity(sys.basis(k), h, v);
            const Mat u = Eigen::kroneckerProduct(amb_eta, amb_v);
            a = apply_kron_identity(to_sparse(sys.projection(ell)), h, u).norm();
        } else {
            const Mat u = Eigen::kroneckerProduct(eta, v);
            a = apply_kron_identity(SpMat(sys.embedding(m, k).adjoint()), h, u).norm();
        }
        out.ell.push_back(ell);
        out.a_ell.push_back(a);
        out.gap.push_back(a - out.target);
    }
    for (std::size_t i = 1; i < out.a_ell.size(); ++i)
        out.monotone_violation = std::max(out.monotone_violation, out.a_ell[i] - out.a_ell[i - 1]);
    out.min_gap = *std::min_element(out.gap.begin(), out.gap.end());
    out.monotone = out.monotone_violation <= tol;
    out.bounded_below = out.min_gap >= -tol;
    out.converged = out.gap.back() <= tol_limit;
    return out;
}

SphericalReport spherical_check(const RepTuple& rep, double tol) {
    SphericalReport out;
    out.symmetric_system = rep.system().kind() == SystemKind::symmetric;
    const Index h = rep.h();
    Mat sum = Mat::Zero(h, h);
    double worst = 0.0;
    for (int i = 0; i < rep.d(); ++i) {
        const Mat& t = rep.op(i);
        const double r = op_norm(Mat(t * t.adjoint() - t.adjoint() * t));
        out.normal_residuals.push_back(r);
        worst = std::max(worst, r);
        sum += t * t.adjoint();
        for (int j = i + 1; j < rep.d(); ++j) {
            const double c = op_norm(Mat(t * rep.op(j) - rep.op(j) * t));
            out.commutator_residuals.push_back(c);
            worst = std::max(worst, c);
        }
    }
    out.sum_residual = op_norm(Mat(sum - Mat::Identity(h, h)));
    out.verdict = worst <= tol && out.sum_residual <= tol;
    return out;
}

double symmetric_fastpath_norm_sq(const RepTuple& rep, int m, int p, const Vec& h_vec, int ell) {
    require_commuting_symmetric(rep);
    if (p < 0 || p >= rep.d()) throw InputError("letter index out of range");
    if (m < 1 || ell < m) throw InputError("fast path needs 1 <= m <= ell");
    const int k = ell - m;
    double total = 0.0;
    for_each_composition(k, rep.d(), [&](const std::vector<int>& c) {
        double ratio = 1.0;
        for (int j = 1; j <= m; ++j) ratio *= static_cast<double>(c[p] + j) / (k + j);
        total += ratio * multinomial(c) * adjoint_power_apply(rep, c, h_vec).squaredNorm();
    });
    return total;
}

double symmetric_fastpath_norm(const RepTuple& rep, int m, int p, const Vec& h_vec, int ell) {
    return std::sqrt(std::max(0.0, symmetric_fastpath_norm_sq(rep, m, p, h_vec, ell)));
}

double symmetric_multinomial_norm_sq(const RepTuple& rep, const Vec& h_vec, int ell) {
    require_commuting_symmetric(rep);
    double total = 0.0;
    for_each_composition(ell, rep.d(), [&](const std::vector<int>& c) {
        total += multinomial(c) * adjoint_power_apply(rep, c, h_vec).squaredNorm();
    });
    return total;
}

NonSphericalSearch search_nonspherical_coisometric(int d, Index h, std::uint64_t seed, int attempts, int wanted,
                                                   double tol) {
    NonSphericalSearch out;
    out.seed = seed;
    Rng rng(seed);
    out.best_min_eigenvalue = -1.0;
    for (int a = 0; a < attempts && static_cast<int>(out.found.size()) < wanted; ++a) {
        ++out.attempts;
        const auto ops = random_commuting_polynomial(rng, d, h, 1.0);
        Mat super = Mat::Zero(h * h, h * h);
        for (const auto& t : ops) super += Eigen::kroneckerProduct(t.conjugate(), t);
        Eigen::ComplexEigenSolver<Mat> es(super);
        if (es.info() != Eigen::Success) continue;
        Index top = 0;
        for (Index i = 1; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(top))) top = i;
        const double rho = std::abs(es.eigenvalues()(top));
        if (rho <= 0.0) continue;
        const Vec ev = es.eigenvectors().col(top);
        Mat g = Eigen::Map<const Mat>(ev.data(), h, h);
        const cd tr = g.trace();
        if (std::abs(tr) == 0.0) continue;
        g = hermitian_part(Mat(g * (std::abs(tr) / tr)));
        const auto sp = hermitian_eig(g);
        const double ratio = sp.values(0) / sp.values(h - 1);
        out.best_min_eigenvalue = std::max(out.best_min_eigenvalue, ratio);
        if (!(ratio > 1e-6)) continue;
        // Similarity by G^{1/2} turns Sum T_i G T_i^* = rho G into a coisometric row.
        const Mat root = psd_sqrt(g);
        const Mat inv_root = pseudo_inverse(root);
        std::vector<Mat> scaled;
        for (const auto& t : ops) scaled.push_back(inv_root * t * root / std::sqrt(rho));
        Mat sum = Mat::Zero(h, h);
        double normality = 0.0;
        for (const auto& t : scaled) {
            sum += t * t.adjoint();
            normality = std::max(normality, op_norm(Mat(t * t.adjoint() - t.adjoint() * t)));
        }
        if (op_norm(Mat(sum - Mat::Identity(h, h))) > tol) continue;
        ++out.coisometric_candidates;
        out.best_normality_defect = std::max(out.best_normality_defect, normality);
        if (normality > 1e-6) out.found.push_back(scaled);
    }
    return out;
}

}  // namespace subprod
