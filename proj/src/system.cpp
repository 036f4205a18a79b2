#include "subprod/system.hpp"

#include "subprod/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace subprod {

namespace {

using Triplet = Eigen::Triplet<cd>;

void check_capacity(int d, int N, const BuildOptions& opts, bool dense) {
    if (d < 1) throw InputError("letter dimension d must be >= 1");
    if (N < 1) throw InputError("truncation N must be >= 1");
    const std::int64_t amb = int_pow(d, N);
    if (amb < 0 || amb > opts.capacity)
        throw CapacityError("ambient dimension d^N = " + std::to_string(d) + "^" + std::to_string(N) +
                            " exceeds capacity budget " + std::to_string(opts.capacity));
    if (dense && amb > opts.dense_capacity)
        throw CapacityError("ambient dimension d^N = " + std::to_string(amb) +
                            " exceeds dense construction budget " + std::to_string(opts.dense_capacity));
}

SpMat sparse_from_dense_basis(const Mat& b) { return to_sparse(b, 1e-15); }

// Operator norm when affordable; Frobenius bound otherwise.
double norm_or_bound(const SpMat& a, bool& exact) {
    if (a.nonZeros() == 0) return 0.0;
    const Index side = std::min(a.rows(), a.cols());
    if (side <= 2048) return op_norm(a);
    exact = false;
    return a.norm();
}

double norm_or_bound(const Mat& a, bool& exact) {
    if (a.size() == 0) return 0.0;
    const Index side = std::min(a.rows(), a.cols());
    if (side <= 2048) return op_norm(a);
    exact = false;
    return a.norm();
}

}  // namespace

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::full: return "full";
        case SystemKind::symmetric: return "symmetric";
        case SystemKind::q_commuting: return "q_commuting";
        case SystemKind::ideal: return "ideal";
        case SystemKind::explicit_projections: return "explicit";
    }
    return "unknown";
}

SystemKind system_kind_from_string(const std::string& name) {
    if (name == "full") return SystemKind::full;
    if (name == "symmetric") return SystemKind::symmetric;
    if (name == "q_commuting") return SystemKind::q_commuting;
    if (name == "ideal") return SystemKind::ideal;
    if (name == "explicit") return SystemKind::explicit_projections;
    throw InputError("unknown system kind '" + name + "'");
}

SubproductSystem::SubproductSystem(int d, int N, SystemKind kind, std::vector<Fiber> fibers,
                                   std::vector<Generator> generators)
    : d_(d), N_(N), kind_(kind), fibers_(std::move(fibers)), generators_(std::move(generators)) {
    if (static_cast<int>(fibers_.size()) != N_ + 1)
        throw InputError("subproduct system needs fibers for levels 0..N");
    for (int n = 0; n <= N_; ++n) {
        const Index amb = int_pow(d_, n);
        if (fibers_[n].ambient != amb || fibers_[n].basis.rows() != amb)
            throw InputError("fiber " + std::to_string(n) + " has wrong ambient dimension");
    }
    step_embeddings_.reserve(N_);
    for (int n = 0; n < N_; ++n) step_embeddings_.push_back(embedding(n, 1));
}

void SubproductSystem::check_level(int n) const {
    if (n < 0 || n > N_)
        throw InputError("level " + std::to_string(n) + " outside 0.." + std::to_string(N_));
}

Index SubproductSystem::rank(int n) const {
    check_level(n);
    return fibers_[n].basis.cols();
}

Index SubproductSystem::ambient_dim(int n) const {
    check_level(n);
    return fibers_[n].ambient;
}

std::vector<Index> SubproductSystem::level_dims() const {
    std::vector<Index> dims;
    for (int n = 0; n <= N_; ++n) dims.push_back(rank(n));
    return dims;
}

const SpMat& SubproductSystem::basis(int n) const {
    check_level(n);
    return fibers_[n].basis;
}

bool SubproductSystem::has_explicit_projection(int n) const {
    check_level(n);
    return fibers_[n].projection.has_value();
}

Mat SubproductSystem::projection(int n) const {
    check_level(n);
    if (fibers_[n].projection) return *fibers_[n].projection;
    const SpMat& b = fibers_[n].basis;
    return Mat(b * SpMat(b.adjoint()));
}

Mat SubproductSystem::apply_projection(int n, const Mat& x) const {
    check_level(n);
    if (x.rows() != fibers_[n].ambient) throw InputError("apply_projection: row count mismatch");
    if (fibers_[n].projection) return (*fibers_[n].projection) * x;
    const SpMat& b = fibers_[n].basis;
    Mat coords = b.adjoint() * x;
    return b * coords;
}

SpMat SubproductSystem::embedding(int n, int m) const {
    check_level(n);
    check_level(m);
    check_level(n + m);
    SpMat pair = sparse_kron(fibers_[n].basis, fibers_[m].basis);
    SpMat j = SpMat(pair.adjoint()) * fibers_[n + m].basis;
    j.prune(cd(0.0), 1e-15);
    return j;
}

const SpMat& SubproductSystem::step_embedding(int n) const {
    if (n < 0 || n >= N_) throw InputError("step_embedding: level out of range");
    return step_embeddings_[n];
}

SystemPtr build_full(int d, int N, const BuildOptions& opts) {
    check_capacity(d, N, opts, false);
    std::vector<SubproductSystem::Fiber> fibers;
    for (int n = 0; n <= N; ++n) {
        const Index amb = int_pow(d, n);
        fibers.push_back({amb, sparse_identity(amb), std::nullopt});
    }
    return std::make_shared<SubproductSystem>(d, N, SystemKind::full, std::move(fibers));
}

SystemPtr build_symmetric(int d, int N, const BuildOptions& opts) {
    check_capacity(d, N, opts, false);
    std::vector<SubproductSystem::Fiber> fibers;
    for (int n = 0; n <= N; ++n) {
        const Index amb = int_pow(d, n);
        // Letter counts packed base (n+1) identify the permutation orbit.
        std::vector<std::int64_t> orbit_key(amb);
        std::unordered_map<std::int64_t, Index> column_of;
        std::vector<Index> orbit_size;
        std::vector<int> letters(n, 0);
        for (Index a = 0; a < amb; ++a) {
            std::vector<int> counts(d, 0);
            for (int l : letters) ++counts[l];
            std::int64_t key = 0;
            for (int c : counts) key = key * (n + 1) + c;
            orbit_key[a] = key;
            auto [it, inserted] = column_of.emplace(key, static_cast<Index>(orbit_size.size()));
            if (inserted) orbit_size.push_back(0);
            ++orbit_size[it->second];
            for (int pos = n - 1; pos >= 0; --pos) {
                if (++letters[pos] < d) break;
                letters[pos] = 0;
            }
        }
        std::vector<Triplet> trips;
        trips.reserve(amb);
        for (Index a = 0; a < amb; ++a) {
            const Index col = column_of[orbit_key[a]];
            trips.emplace_back(a, col, cd(1.0 / std::sqrt(static_cast<double>(orbit_size[col]))));
        }
        SpMat b(amb, static_cast<Index>(orbit_size.size()));
        b.setFromTriplets(trips.begin(), trips.end());
        b.makeCompressed();
        fibers.push_back({amb, std::move(b), std::nullopt});
    }
    return std::make_shared<SubproductSystem>(d, N, SystemKind::symmetric, std::move(fibers));
}

namespace {

SystemPtr build_ideal_impl(int d, const std::vector<Generator>& gens, int N, const BuildOptions& opts,
                           SystemKind kind) {
    check_capacity(d, N, opts, true);
    for (const auto& g : gens) {
        if (g.degree < 2) throw InputError("ideal generators must have degree >= 2");
        if (g.coords.size() != int_pow(d, g.degree))
            throw InputError("generator of degree " + std::to_string(g.degree) + " needs d^degree coordinates");
        if (g.coords.norm() == 0.0) throw InputError("zero generator");
    }
    std::vector<SubproductSystem::Fiber> fibers;
    fibers.push_back({1, sparse_identity(1), std::nullopt});
    fibers.push_back({d, sparse_identity(d), std::nullopt});
    Mat killed(d, 0);  // orthonormal basis of Y(n-1)
    const Mat id_d = Mat::Identity(d, d);
    for (int n = 2; n <= N; ++n) {
        const Index amb = int_pow(d, n);
        std::vector<const Vec*> fresh;
        for (const auto& g : gens)
            if (g.degree == n) fresh.push_back(&g.coords);
        const Index prev = killed.cols();
        Mat span(amb, 2 * prev * d + static_cast<Index>(fresh.size()));
        Index col = 0;
        if (prev > 0) {
            Mat right = Eigen::kroneckerProduct(killed, id_d);
            Mat left = Eigen::kroneckerProduct(id_d, killed);
            span.middleCols(col, right.cols()) = right;
            col += right.cols();
            span.middleCols(col, left.cols()) = left;
            col += left.cols();
        }
        for (const Vec* g : fresh) span.col(col++) = *g / g->norm();
        span.conservativeResize(amb, col);
        killed = range_basis(span, opts.rank_cutoff);
        Mat keep = complement_basis(killed, opts.rank_cutoff);
        if (killed.cols() == 0) keep = Mat::Identity(amb, amb);
        fibers.push_back({amb, sparse_from_dense_basis(keep), std::nullopt});
    }
    return std::make_shared<SubproductSystem>(d, N, kind, std::move(fibers), gens);
}

}  // namespace

SystemPtr build_from_ideal(int d, const std::vector<Generator>& generators, int N, const BuildOptions& opts) {
    return build_ideal_impl(d, generators, N, opts, SystemKind::ideal);
}

SystemPtr build_q_commuting(int d, const Mat& q, int N, const BuildOptions& opts) {
    if (q.rows() != d || q.cols() != d) throw InputError("q must be a d x d matrix");
    std::vector<Generator> gens;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Generator g{2, Vec::Zero(d * d)};
            g.coords(i * d + j) = 1.0;
            g.coords(j * d + i) = -q(i, j);
            gens.push_back(std::move(g));
        }
    if (N < 2) gens.clear();
    return build_ideal_impl(d, gens, N, opts, SystemKind::q_commuting);
}

SystemPtr build_explicit(int d, const std::vector<Mat>& projections, const BuildOptions& opts) {
    const int N = static_cast<int>(projections.size()) - 1;
    check_capacity(d, N, opts, true);
    std::vector<SubproductSystem::Fiber> fibers;
    for (int n = 0; n <= N; ++n) {
        const Index amb = int_pow(d, n);
        const Mat& p = projections[n];
        if (p.rows() != amb || p.cols() != amb)
            throw InputError("projection p_" + std::to_string(n) + " must be d^n x d^n");
        Mat b = range_basis(hermitian_part(p), opts.rank_cutoff);
        fibers.push_back({amb, sparse_from_dense_basis(b), p});
    }
    return std::make_shared<SubproductSystem>(d, N, SystemKind::explicit_projections, std::move(fibers));
}

ValidationReport validate_system(const SubproductSystem& sys, double tol_proj) {
    ValidationReport rep;
    const int N = sys.truncation();
    const int d = sys.dim();
    bool exact = true;
    rep.level_compatibility.assign(N + 1, 0.0);

    for (int n = 0; n <= N; ++n) {
        const SpMat& b = sys.basis(n);
        SpMat gram = SpMat(b.adjoint()) * b - sparse_identity(b.cols());
        gram.prune(cd(0.0), 0.0);
        rep.basis_residual = std::max(rep.basis_residual, norm_or_bound(gram, exact));
        if (sys.has_explicit_projection(n)) {
            const Mat p = sys.projection(n);
            rep.hermitian_residual = std::max(rep.hermitian_residual, norm_or_bound(Mat(p - p.adjoint()), exact));
            rep.idempotent_residual = std::max(rep.idempotent_residual, norm_or_bound(Mat(p * p - p), exact));
            rep.basis_residual = std::max(rep.basis_residual, norm_or_bound(Mat(Mat(b * SpMat(b.adjoint())) - p), exact));
        } else {
            // p_n = B B* is Hermitian by construction; idempotence reduces to B*B = I.
            rep.idempotent_residual = std::max(rep.idempotent_residual, norm_or_bound(gram, exact));
        }
    }
    // Levels 0 and 1 are fixed: p_0 = [1], p_1 = I_d.
    {
        SpMat e0 = sys.basis(0);
        Mat p1 = sys.projection(1);
        double r = std::max(std::abs(Mat(e0 * SpMat(e0.adjoint()))(0, 0) - 1.0),
                            norm_or_bound(Mat(p1 - Mat::Identity(d, d)), exact));
        rep.basis_residual = std::max(rep.basis_residual, r);
    }

    for (int k = 2; k <= N; ++k) {
        double worst = 0.0;
        for (int n = 1; n < k; ++n) {
            const int m = k - n;
            const Index dn = int_pow(d, n), dm = int_pow(d, m);
            if (sys.has_explicit_projection(k) || sys.has_explicit_projection(n) ||
                sys.has_explicit_projection(m)) {
                const Mat pk = sys.projection(k);
                const Mat left = Eigen::kroneckerProduct(sys.projection(n), Mat::Identity(dm, dm));
                const Mat right = Eigen::kroneckerProduct(Mat::Identity(dn, dn), sys.projection(m));
                worst = std::max(worst, norm_or_bound(Mat(pk * left - pk), exact));
                worst = std::max(worst, norm_or_bound(Mat(pk * right - pk), exact));
            } else {
                // p_k (p_n (x) I) = p_k  <=>  (p_n (x) I) B_k = B_k.
                const SpMat& bk = sys.basis(k);
                const SpMat& bn = sys.basis(n);
                const SpMat& bm = sys.basis(m);
                SpMat left_coords = SpMat(sparse_kron(bn, sparse_identity(dm)).adjoint()) * bk;
                SpMat left = sparse_kron(bn, sparse_identity(dm)) * left_coords - bk;
                SpMat right_coords = SpMat(sparse_kron(sparse_identity(dn), bm).adjoint()) * bk;
                SpMat right = sparse_kron(sparse_identity(dn), bm) * right_coords - bk;
                left.prune(cd(0.0), 0.0);
                right.prune(cd(0.0), 0.0);
                worst = std::max(worst, norm_or_bound(left, exact));
                worst = std::max(worst, norm_or_bound(right, exact));
            }
        }
        rep.level_compatibility[k] = worst;
        rep.compatibility_residual = std::max(rep.compatibility_residual, worst);
    }
    rep.exact_norms = exact;
    rep.verdict = rep.hermitian_residual <= tol_proj && rep.idempotent_residual <= tol_proj &&
                  rep.basis_residual <= tol_proj && rep.compatibility_residual <= tol_proj;
    return rep;
}

TruncatedFock::TruncatedFock(const SubproductSystem& sys, int depth) : N(depth) {
    if (depth < 0 || depth > sys.truncation())
        throw InputError("Fock depth " + std::to_string(depth) + " exceeds system truncation");
    for (int n = 0; n <= depth; ++n) {
        offsets.push_back(total_dim);
        level_dims.push_back(sys.rank(n));
        total_dim += sys.rank(n);
    }
}

int TruncatedFock::level_of(Index coord) const {
    if (coord < 0 || coord >= total_dim) throw InputError("Fock coordinate out of range");
    auto it = std::upper_bound(offsets.begin(), offsets.end(), coord);
    return static_cast<int>(it - offsets.begin()) - 1;
}

SpMat projected_product(const SubproductSystem& sys, int n, int m) {
    if (n < 0 || m < 0 || n + m > sys.truncation()) throw InputError("projected_product: levels leave the truncation");
    const int k = n + m;
    if (sys.has_explicit_projection(k)) {
        const SpMat pair = sparse_kron(sys.basis(n), sys.basis(m));
        const Mat coords = Mat(sys.basis(k).adjoint()) * (sys.projection(k) * Mat(pair));
        return to_sparse(coords, 1e-15);
    }
    return SpMat(sys.embedding(n, m).adjoint());
}

Mat shift_block(const SubproductSystem& sys, int n, const Vec& zeta, int m) {
    if (n < 0 || n > sys.truncation()) throw InputError("shift degree outside 0..N");
    if (zeta.size() != sys.rank(n))
        throw InputError("zeta has length " + std::to_string(zeta.size()) + ", fiber X(" + std::to_string(n) +
                         ") has dimension " + std::to_string(sys.rank(n)));
    if (m < 0 || n + m > sys.truncation()) throw InputError("shift block leaves the truncation");
    // C (zeta (x) I_{r_m}) with C the projected product coordinates.
    SpMat col(zeta.size(), 1);
    for (Index i = 0; i < zeta.size(); ++i)
        if (zeta(i) != cd(0.0)) col.insert(i, 0) = zeta(i);
    const SpMat lift = sparse_kron(col, sparse_identity(sys.rank(m)));
    return Mat(projected_product(sys, n, m) * lift);
}

SpMat shift_matrix(const SubproductSystem& sys, int n, const Vec& zeta, int N) {
    if (N < 0) N = sys.truncation();
    TruncatedFock fock(sys, N);
    if (n < 0 || n > sys.truncation()) throw InputError("shift degree outside 0..N");
    if (zeta.size() != sys.rank(n)) throw InputError("zeta length does not match fiber dimension");
    std::vector<Triplet> trips;
    for (int m = 0; m + n <= N; ++m) {
        const Mat blk = shift_block(sys, n, zeta, m);
        for (Index c = 0; c < blk.cols(); ++c)
            for (Index r = 0; r < blk.rows(); ++r)
                if (std::abs(blk(r, c)) > 1e-15)
                    trips.emplace_back(fock.offsets[n + m] + r, fock.offsets[m] + c, blk(r, c));
    }
    SpMat s(fock.total_dim, fock.total_dim);
    s.setFromTriplets(trips.begin(), trips.end());
    s.makeCompressed();
    return s;
}

SpMat gauge_unitary(const SubproductSystem& sys, cd lambda, int N) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw InputError("gauge parameter must have modulus 1");
    if (N < 0) N = sys.truncation();
    TruncatedFock fock(sys, N);
    std::vector<Triplet> trips;
    cd power = 1.0;
    for (int n = 0; n <= N; ++n) {
        for (Index i = 0; i < fock.level_dims[n]; ++i)
            trips.emplace_back(fock.offsets[n] + i, fock.offsets[n] + i, power);
        power *= lambda;
    }
    SpMat w(fock.total_dim, fock.total_dim);
    w.setFromTriplets(trips.begin(), trips.end());
    return w;
}

SpMat fock_embedding(const SubproductSystem& sys, int N) {
    if (N < 0) N = sys.truncation();
    TruncatedFock fock(sys, N);
    std::vector<Triplet> trips;
    Index row = 0;
    for (int n = 0; n <= N; ++n) {
        const SpMat& b = sys.basis(n);
        for (Index c = 0; c < b.outerSize(); ++c)
            for (SpMat::InnerIterator it(b, c); it; ++it)
                trips.emplace_back(row + it.row(), fock.offsets[n] + c, it.value());
        row += b.rows();
    }
    SpMat e(row, fock.total_dim);
    e.setFromTriplets(trips.begin(), trips.end());
    return e;
}

Vec basis_tensor(int d, const std::vector<int>& letters) {
    Index idx = 0;
    for (int l : letters) {
        if (l < 0 || l >= d) throw InputError("letter index out of range");
        idx = idx * d + l;
    }
    Vec v = Vec::Zero(int_pow(d, static_cast<int>(letters.size())));
    v(idx) = 1.0;
    return v;
}

}  // namespace subprod
