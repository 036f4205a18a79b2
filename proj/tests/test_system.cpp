#include "subprod/errors.hpp"
#include "subprod/system.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace subprod;

namespace {

Mat proj(const SubproductSystem& sys, int n) { return sys.projection(n); }

}  // namespace

TEST_SUITE("system") {

TEST_CASE("full system fibers are the whole tensor powers") {
    const auto sys = build_full(2, 4);
    for (int n = 0; n <= 4; ++n) {
        CHECK(sys->rank(n) == oracle::ipow(2, n));
        CHECK(oracle::opnorm(proj(*sys, n) - Mat::Identity(sys->rank(n), sys->rank(n))) == doctest::Approx(0.0));
    }
    CHECK(validate_system(*sys).verdict);
}

TEST_CASE("symmetric fibers match the permutation average") {
    for (int d = 1; d <= 3; ++d)
        for (int n = 0; n <= 4; ++n) {
            const auto sys = build_symmetric(d, std::max(n, 1));
            const Mat p = oracle::symmetrizer(d, n);
            CHECK(oracle::opnorm(proj(*sys, n) - p) <= 1e-12);
            CHECK(sys->rank(n) == static_cast<Index>(std::llround(p.trace().real())));
        }
}

TEST_CASE("symmetric cube of C^3 has ten dimensions") {
    const auto sys = build_symmetric(3, 3);
    CHECK(sys->rank(3) == 10);
    const auto rep = validate_system(*sys);
    CHECK(rep.verdict);
    CHECK(rep.compatibility_residual <= 1e-12);
}

TEST_CASE("symmetric basis columns are normalized orbit sums in first-appearance order") {
    const auto sys = build_symmetric(2, 2);
    const Mat b = Mat(sys->basis(2));
    const double s = 1.0 / std::sqrt(2.0);
    Mat expected = Mat::Zero(4, 3);
    expected(0, 0) = 1.0;
    expected(1, 1) = s;
    expected(2, 1) = s;
    expected(3, 2) = 1.0;
    CHECK(oracle::opnorm(b - expected) <= 1e-15);
}

TEST_CASE("commutator ideal reproduces the symmetric system") {
    for (int d = 2; d <= 3; ++d) {
        std::vector<Generator> gens;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                Vec g = basis_tensor(d, {i, j}) - basis_tensor(d, {j, i});
                gens.push_back({2, g});
            }
        const int N = d == 2 ? 5 : 4;
        const auto ideal = build_from_ideal(d, gens, N);
        const auto sym = build_symmetric(d, N);
        for (int n = 0; n <= N; ++n) CHECK(oracle::opnorm(proj(*ideal, n) - proj(*sym, n)) <= 1e-9);
        CHECK(validate_system(*ideal).verdict);
    }
}

TEST_CASE("q-commuting fibers kill e_j(x)e_i - q e_i(x)e_j combinations at level two") {
    const cd q(0.3, 0.4);
    Mat qm = Mat::Constant(2, 2, q);
    const auto sys = build_q_commuting(2, qm, 4);
    // Hilbert series of the q-commuting plane: dim X(n) = n + 1.
    for (int n = 0; n <= 4; ++n) CHECK(sys->rank(n) == n + 1);
    const Vec g = basis_tensor(2, {0, 1}) - q * basis_tensor(2, {1, 0});
    CHECK((proj(*sys, 2) * g).norm() <= 1e-12);
    CHECK(validate_system(*sys).verdict);
}

TEST_CASE("nilpotent ideal in one letter leaves fibers of rank one and zero") {
    const auto sys = build_from_ideal(1, {{2, Vec::Ones(1)}}, 4);
    CHECK(sys->rank(0) == 1);
    CHECK(sys->rank(1) == 1);
    for (int n = 2; n <= 4; ++n) CHECK(sys->rank(n) == 0);
    CHECK(validate_system(*sys).verdict);
}

TEST_CASE("explicit projections equal to the symmetrizers rebuild the symmetric system") {
    std::vector<Mat> ps;
    for (int n = 0; n <= 3; ++n) ps.push_back(oracle::symmetrizer(2, n));
    const auto sys = build_explicit(2, ps);
    const auto val = validate_system(*sys);
    CHECK(val.verdict);
    const auto sym = build_symmetric(2, 3);
    for (int n = 0; n <= 3; ++n) CHECK(sys->rank(n) == sym->rank(n));
}

TEST_CASE("explicit projections violating compatibility are rejected by validation") {
    std::vector<Mat> ps{Mat::Identity(1, 1), Mat::Identity(2, 2), Mat::Identity(4, 4)};
    // X(1) = span{e_0}, X(2) = E(x)E is not inside X(1)(x)X(1).
    ps[1](1, 1) = 0.0;
    const auto sys = build_explicit(2, ps);
    const auto val = validate_system(*sys);
    CHECK_FALSE(val.verdict);
    CHECK(val.compatibility_residual == doctest::Approx(1.0));
}

TEST_CASE("non-idempotent explicit projection fails validation") {
    std::vector<Mat> ps{Mat::Identity(1, 1), 0.5 * Mat::Identity(2, 2)};
    const auto sys = build_explicit(2, ps);
    const auto val = validate_system(*sys);
    CHECK_FALSE(val.verdict);
    CHECK(val.idempotent_residual == doctest::Approx(0.25));
}

TEST_CASE("compressed ambient shifts equal the fiber shifts") {
    oracle::Gen gen(11);
    const int d = 2, N = 4;
    const auto sys = build_symmetric(d, N);
    std::vector<Mat> ps;
    for (int k = 0; k <= N; ++k) ps.push_back(oracle::symmetrizer(d, k));
    const Mat b = Mat(fock_embedding(*sys, N));
    for (int n = 1; n <= 2; ++n) {
        const Vec zeta = gen.unit(sys->rank(n));
        const Vec amb = Mat(sys->basis(n)) * zeta;
        const Mat full = oracle::ambient_shift(ps, d, n, amb, N);
        const Mat expected = b.adjoint() * full * b;
        CHECK(oracle::opnorm(Mat(shift_matrix(*sys, n, zeta, N)) - expected) <= 1e-12);
    }
}

TEST_CASE("gauge unitary scales level-n shifts by lambda^n") {
    oracle::Gen gen(5);
    const auto sys = build_symmetric(3, 4);
    const cd lambda = gen.phase();
    const SpMat w = gauge_unitary(*sys, lambda);
    for (int n = 1; n <= 3; ++n) {
        const SpMat s = shift_matrix(*sys, n, gen.unit(sys->rank(n)));
        const Mat lhs = Mat(w * s * SpMat(w.adjoint()));
        CHECK(oracle::opnorm(lhs - std::pow(lambda, n) * Mat(s)) <= 1e-12);
    }
    CHECK_THROWS_AS(gauge_unitary(*sys, cd(1.1, 0.0)), InputError);
}

TEST_CASE("truncated Fock bookkeeping") {
    const auto sys = build_symmetric(2, 3);
    const TruncatedFock fock(*sys, 3);
    CHECK(fock.total_dim == 1 + 2 + 3 + 4);
    CHECK(fock.level_of(0) == 0);
    CHECK(fock.level_of(2) == 1);
    CHECK(fock.level_of(9) == 3);
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(build_full(4, 12), CapacityError);
    CHECK_THROWS_AS(build_from_ideal(2, {{1, Vec::Ones(2)}}, 3), InputError);
    CHECK_THROWS_AS(build_from_ideal(2, {{2, Vec::Ones(3)}}, 3), InputError);
    CHECK_THROWS_AS(system_kind_from_string("banana"), InputError);
}

TEST_CASE("embedding J_{n,m} is an isometry for every split") {
    const auto sys = build_symmetric(3, 4);
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; n + m <= 4; ++m) {
            const Mat j = Mat(sys->embedding(n, m));
            CHECK(oracle::opnorm(j.adjoint() * j - Mat::Identity(j.cols(), j.cols())) <= 1e-12);
        }
}

}  // TEST_SUITE
