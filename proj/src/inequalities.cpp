#include "subprod/inequalities.hpp"

#include "subprod/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace subprod {

int PolynomialX::max_level() const {
    int level = 0;
    for (const auto& t : terms) level = std::max(level, t.n);
    return level;
}

int SMonomial::degree() const {
    int k = 0;
    for (const auto& f : factors) k += f.adjoint ? -f.n : f.n;
    return k;
}

SMonomial SMonomial::concat(const SMonomial& right) const {
    SMonomial out = *this;
    out.factors.insert(out.factors.end(), right.factors.begin(), right.factors.end());
    return out;
}

Mat eval_poly(const RepTuple& rep, const PolynomialX& poly) {
    if (poly.max_level() > rep.system().truncation()) throw InputError("polynomial level exceeds truncation");
    Mat out = poly.alpha * Mat::Identity(rep.h(), rep.h());
    for (const auto& t : poly.terms) out += op_of_fiber(rep, t.n, t.coords);
    return out;
}

SpMat eval_poly_shift(const SubproductSystem& sys, const PolynomialX& poly, int N) {
    if (N < 0) N = sys.truncation();
    if (poly.max_level() > N) throw InputError("polynomial level exceeds truncation");
    const TruncatedFock fock(sys, N);
    SpMat out = poly.alpha * sparse_identity(fock.total_dim);
    for (const auto& t : poly.terms) out += shift_matrix(sys, t.n, t.coords, N);
    return out;
}

VNReport vn_inequality_check(const RepTuple& rep, const std::vector<VNPair>& pairs, int N, double tol) {
    const auto& sys = rep.system();
    if (N < 0) N = sys.truncation();
    int level = 0;
    for (const auto& pq : pairs) level = std::max({level, pq.p.max_level(), pq.q.max_level()});
    if (2 * level > N) throw InputError("polynomial levels must not exceed N/2");
    VNReport out;
    Mat lhs = Mat::Zero(rep.h(), rep.h());
    for (const auto& pq : pairs) lhs += eval_poly(rep, pq.p) * eval_poly(rep, pq.q).adjoint();
    out.lhs = op_norm(lhs);
    for (int depth = std::max(level, 1); depth <= N; ++depth) {
        const TruncatedFock fock(sys, depth);
        SpMat rhs(fock.total_dim, fock.total_dim);
        for (const auto& pq : pairs)
            rhs += eval_poly_shift(sys, pq.p, depth) * SpMat(eval_poly_shift(sys, pq.q, depth).adjoint());
        out.depths.push_back(depth);
        out.rhs_trend.push_back(op_norm(rhs));
    }
    for (std::size_t i = 1; i < out.rhs_trend.size(); ++i)
        out.monotone_violation = std::max(out.monotone_violation, out.rhs_trend[i - 1] - out.rhs_trend[i]);
    out.rhs = out.rhs_trend.back();
    out.monotone = out.monotone_violation <= tol;
    out.verified = out.lhs <= out.rhs + tol;
    return out;
}

SpMat eval_monomial(const SubproductSystem& sys, const SMonomial& mono, int N) {
    if (N < 0) N = sys.truncation();
    const TruncatedFock fock(sys, N);
    SpMat out = sparse_identity(fock.total_dim);
    for (const auto& f : mono.factors) {
        if (f.n > N) throw InputError("monomial factor level exceeds truncation");
        const SpMat s = shift_matrix(sys, f.n, f.coords, N);
        out = f.adjoint ? SpMat(out * SpMat(s.adjoint())) : SpMat(out * s);
    }
    return out;
}

GaugeReport gauge_grading_check(const SubproductSystem& sys, const SMonomial& mono, cd lambda, int N, double tol) {
    if (N < 0) N = sys.truncation();
    const TruncatedFock fock(sys, N);
    GaugeReport out;
    out.degree = mono.degree();
    const SpMat a = eval_monomial(sys, mono, N);
    const SpMat w = gauge_unitary(sys, lambda, N);
    const Mat diff = Mat(w * a * SpMat(w.adjoint())) - std::pow(lambda, out.degree) * Mat(a);

    // A column at level m is exact when no factor pushes its path past level N.
    std::vector<Index> cols;
    for (int m = 0; m <= N; ++m) {
        int level = m;
        bool clipped = false;
        for (auto it = mono.factors.rbegin(); it != mono.factors.rend(); ++it) {
            if (it->adjoint) {
                level -= it->n;
                if (level < 0) break;
            } else {
                level += it->n;
                if (level > N) {
                    clipped = true;
                    break;
                }
            }
        }
        if (clipped) continue;
        for (Index i = 0; i < fock.level_dims[m]; ++i) cols.push_back(fock.offsets[m] + i);
    }
    Mat exact(diff.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) exact.col(static_cast<Index>(c)) = diff.col(cols[c]);
    out.exact_columns = static_cast<Index>(cols.size());
    out.residual = op_norm(exact);
    out.verdict = out.residual <= tol;
    return out;
}

namespace {

void require_ideal(const SubproductSystem& sys) {
    if (sys.kind() != SystemKind::ideal && sys.kind() != SystemKind::q_commuting)
        throw InputError("quotient checks need a system built from ideal generators");
}

SystemPtr matching_full(const SubproductSystem& sys, int N) {
    BuildOptions opts;
    opts.capacity = std::max<std::int64_t>(opts.capacity, int_pow(sys.dim(), N));
    return build_full(sys.dim(), N, opts);
}

}  // namespace

QuotientReport quotient_compression_check(const SubproductSystem& sys, int N, double tol) {
    require_ideal(sys);
    if (N < 0) N = sys.truncation();
    const int d = sys.dim();
    QuotientReport out;
    const SystemPtr full = matching_full(sys, N);
    const SpMat b = fock_embedding(sys, N);
    const SpMat bt = b.adjoint();

    for (int n = 1; n <= N - 1; ++n)
        for (Index k = 0; k < sys.rank(n); ++k) {
            const Vec zeta = Vec::Unit(sys.rank(n), k);
            const Vec amb = sys.basis(n) * zeta;
            const SpMat compressed = bt * shift_matrix(*full, n, amb, N) * b;
            const SpMat diff = compressed - shift_matrix(sys, n, zeta, N);
            out.compression_residual = std::max(out.compression_residual, op_norm(diff));
        }

    out.ranks_match = true;
    for (int k = 0; k <= N; ++k) {
        const Index amb = sys.ambient_dim(k);
        const Mat bk = Mat(sys.basis(k));
        const Mat killed = range_basis(Mat(Mat::Identity(amb, amb) - bk * bk.adjoint()));
        Mat span(amb, 0);
        for (const auto& g : sys.generators()) {
            if (g.degree > k) continue;
            for (int left = 0; left + g.degree <= k; ++left) {
                const int right = k - g.degree - left;
                const Mat il = Mat::Identity(int_pow(d, left), int_pow(d, left));
                const Mat ir = Mat::Identity(int_pow(d, right), int_pow(d, right));
                const Mat placed = Eigen::kroneckerProduct(il, Eigen::kroneckerProduct(Mat(g.coords), ir).eval());
                span.conservativeResize(amb, span.cols() + placed.cols());
                span.rightCols(placed.cols()) = placed;
            }
        }
        const Mat direct = span.cols() ? range_basis(span) : Mat(amb, 0);
        out.ideal_ranks.push_back(killed.cols());
        out.direct_ranks.push_back(direct.cols());
        if (killed.cols() != direct.cols()) out.ranks_match = false;
        const Mat gap = killed * killed.adjoint() - direct * direct.adjoint();
        out.ideal_span_gap = std::max(out.ideal_span_gap, op_norm(gap));
    }

    for (const auto& g : sys.generators()) {
        if (g.degree > N) continue;
        SMonomial mono;
        mono.factors.push_back({false, g.degree, g.coords});
        out.generator_compression = std::max(out.generator_compression, coset_distance_estimate(sys, mono, N));
    }
    out.verdict = out.compression_residual <= tol && out.ranks_match && out.ideal_span_gap <= tol &&
                  out.generator_compression <= tol;
    return out;
}

double coset_distance_estimate(const SubproductSystem& sys, const SMonomial& full_monomial, int N) {
    if (N < 0) N = sys.truncation();
    const SystemPtr full = matching_full(sys, N);
    const SpMat b = fock_embedding(sys, N);
    const SpMat a = eval_monomial(*full, full_monomial, N);
    return op_norm(SpMat(SpMat(b.adjoint()) * a * b));
}

}  // namespace subprod
