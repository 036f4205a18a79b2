#include "subprod/dilation.hpp"
#include "subprod/errors.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace subprod;

namespace {

Mat lower_shift(Index n) {
    Mat j = Mat::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) j(i + 1, i) = 1.0;
    return j;
}

Mat direct_sum(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

}  // namespace

TEST_SUITE("dilation") {

TEST_CASE("dilation of a random strict contraction") {
    oracle::Gen gen(41);
    const auto sys = build_full(2, 8);
    const RepTuple rep(sys, gen.row_contraction(2, 3, 0.6));
    const auto dil = dilate(rep, 8);
    CHECK(dil.verdict);
    CHECK(dil.r_U == 0);
    CHECK(dil.r_D == 3);
    CHECK(dil.dilation_residual <= 1e-8);
    // W is an isometry up to the truncated tail 0.36^9.
    CHECK(dil.isometry_residual <= 1e-3);
    CHECK(dil.isometry_residual == doctest::Approx(dil.truncation_defect).epsilon(1e-6));
}

TEST_CASE("compressing the dilation recovers the tuple") {
    oracle::Gen gen(42);
    const auto sys = build_symmetric(2, 14);
    const RepTuple rep(sys, gen.commuting(2, 2, 0.4));
    const auto dil = dilate(rep, 14);
    for (int i = 0; i < 2; ++i) {
        const Mat v = dil.v_op(*sys, 1, Vec::Unit(2, i));
        CHECK(oracle::opnorm(dil.W.adjoint() * v * dil.W - rep.op(i)) <= 1e-8);
    }
}

TEST_CASE("spherical tuples dilate to themselves on U") {
    oracle::Gen gen(43);
    const auto sys = build_symmetric(3, 5);
    const RepTuple rep(sys, gen.spherical(3, 3));
    const auto dil = dilate(rep, 5);
    CHECK(dil.r_D == 0);
    CHECK(dil.r_U == 3);
    CHECK(dil.verdict);
    for (double r : dil.coisometry_residuals) CHECK(r <= 1e-10);
    CHECK(dil.v_coisometry_defect <= 1e-10);
    for (int i = 0; i < 3; ++i) {
        const Mat z = dil.z_op(*sys, 1, Vec::Unit(3, i));
        CHECK(oracle::opnorm(dil.Y.adjoint() * z * dil.Y - rep.op(i)) <= 1e-10);
    }
}

TEST_CASE("a mixed tuple has both a Fock part and a coisometric part") {
    oracle::Gen gen(44);
    const auto sys = build_full(1, 10);
    const Mat t = direct_sum(Mat::Constant(1, 1, 0.3), gen.unitary(2));
    const auto dil = dilate(RepTuple(sys, {t}), 10);
    CHECK(dil.r_U == 2);
    CHECK(dil.r_D == 1);
    CHECK(dil.covariance_residual <= 1e-10);
    CHECK(dil.intertwining_residual <= 1e-10);
    CHECK(dil.dilation_residual <= 1e-10);
}

TEST_CASE("dilation refuses invalid tuples") {
    const auto sym = build_symmetric(2, 3);
    Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
    a(1, 0) = 0.5;
    b(0, 1) = 0.5;
    CHECK_THROWS_AS(dilate(RepTuple(sym, {a, b})), PreconditionError);
}

TEST_CASE("Wold split of the nilpotent ideal example is purely induced") {
    const auto sys = build_from_ideal(1, {{2, Vec::Ones(1)}}, 2);
    const auto w = wold(RepTuple(sys, {lower_shift(2)}), 2);
    CHECK(w.w_unitary);
    CHECK(w.coisometric_dim == 0);
    CHECK(w.induced_dim == 2);
    CHECK(w.truncation_defect == 0.0);
    CHECK(w.reconstruction_residual <= 1e-12);
}

TEST_CASE("Wold split of a unitary has no induced part") {
    oracle::Gen gen(45);
    const auto sys = build_full(1, 4);
    const auto w = wold(RepTuple(sys, {gen.unitary(3)}), 4);
    CHECK(w.induced_dim == 0);
    CHECK(w.coisometric_dim == 3);
    CHECK(w.reconstruction_residual <= 1e-10);
    CHECK(oracle::opnorm(w.dilation.W.adjoint() * w.dilation.W - Mat::Identity(3, 3)) <= 1e-10);
}

TEST_CASE("Wold split of a truncated shift plus a unitary") {
    oracle::Gen gen(46);
    for (int N = 1; N <= 5; ++N) {
        const auto sys = build_full(1, N);
        const Mat t = direct_sum(lower_shift(N + 1), Mat::Constant(1, 1, gen.phase()));
        const Mat u = gen.unitary(N + 2);
        const auto w = wold(RepTuple(sys, {Mat(u * t * u.adjoint())}), N);
        CHECK(w.induced_dim == N + 1);
        CHECK(w.coisometric_dim == 1);
        CHECK(w.unitary_residual <= 1e-10);
        CHECK(w.reconstruction_residual <= 1e-10);
    }
}

TEST_CASE("Wold refuses tuples that are not relatively isometric") {
    const auto sys = build_full(2, 4);
    CHECK_THROWS_AS(wold(RepTuple(sys, {Mat::Constant(1, 1, 0.5), Mat::Zero(1, 1)})), PreconditionError);
}

TEST_CASE("inductive system maps compose and contract") {
    oracle::Gen gen(47);
    const auto sys = build_symmetric(2, 6);
    const RepTuple rep(sys, gen.spherical(2, 2));
    for (int n = 0; n <= 2; ++n)
        for (int ell = n; ell <= 6; ++ell) CHECK(oracle::opnorm(u_map(rep, n, ell)) <= 1.0 + 1e-10);
    const Vec x = gen.unit(sys->rank(1) * 2), y = gen.unit(sys->rank(2) * 2);
    const auto g = inductive_gram(rep, 1, x, 2, y, 6);
    CHECK(g.fully_coisometric);
    CHECK(g.composition_residual <= 1e-10);
    CHECK(g.g.size() == 5);
}

TEST_CASE("weak von Neumann inequality through the dilation") {
    oracle::Gen gen(48);
    const auto sys = build_symmetric(2, 6);
    const RepTuple rep(sys, gen.commuting(2, 2, 0.9));
    std::vector<WeakVNSample> samples;
    for (int k = 0; k < 4; ++k) {
        const int n = gen.integer(1, 2), m = gen.integer(0, 2);
        samples.push_back({n, m, gen.unit(sys->rank(n)), gen.unit(sys->rank(m))});
    }
    const auto r = weak_vn_check(rep, 6, samples);
    CHECK(r.all_verified);
    for (const auto& s : r.samples) CHECK(s.lhs_t <= s.rhs + 1e-8);
}

}  // TEST_SUITE
