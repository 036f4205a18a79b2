#include "subprod/errors.hpp"
#include "subprod/representation.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace subprod;

namespace {

Mat gram_of_adjoint(const Mat& adj) { return adj.adjoint() * adj; }

}  // namespace

TEST_SUITE("representation") {

TEST_CASE("row grams from t_tilde match the brute-force word sums") {
    oracle::Gen gen(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = gen.integer(1, 3);
        const Index h = gen.integer(1, 3);
        const bool symmetric = trial % 2 == 1;
        const auto sys = symmetric ? build_symmetric(d, 4) : build_full(d, 4);
        const auto ts = symmetric ? gen.commuting(d, h, gen.real(0.5, 1.0)) : gen.row_contraction(d, h, gen.real(0.5, 1.0));
        const RepTuple rep(sys, ts);
        for (int n = 0; n <= 4; ++n) {
            const Mat p = symmetric ? oracle::symmetrizer(d, n) : Mat::Identity(oracle::ipow(d, n), oracle::ipow(d, n));
            const Mat expected = oracle::projected_row_gram(ts, p, n);
            const Mat tt = t_tilde(rep, n);
            CHECK(oracle::opnorm(tt * tt.adjoint() - expected) <= 1e-10);
        }
    }
}

TEST_CASE("both factorizations of the row adjoint agree with the direct assembly") {
    oracle::Gen gen(7);
    const auto sys = build_symmetric(3, 4);
    const RepTuple rep(sys, gen.commuting(3, 3, 0.9));
    const auto adj = t_tilde_adjoints(rep, 4);
    for (int n = 0; n <= 4; ++n) CHECK(oracle::opnorm(adj[n] - t_tilde(rep, n).adjoint()) <= 1e-12);
    for (int n = 1; n <= 3; ++n) CHECK(oracle::opnorm(t_tilde_adjoint_left(rep, n, adj[n]) - adj[n + 1]) <= 1e-12);
}

TEST_CASE("fiber operators are products of the generating matrices") {
    oracle::Gen gen(8);
    const auto sys = build_full(2, 3);
    const auto ts = gen.row_contraction(2, 2, 1.0);
    const RepTuple rep(sys, ts);
    const Vec e = basis_tensor(2, {1, 0, 1});
    CHECK(oracle::opnorm(op_of_fiber(rep, 3, e) - ts[1] * ts[0] * ts[1]) <= 1e-13);
    const Mat w = word_products(rep, 2);
    CHECK(w.rows() == 4);
    CHECK(w.cols() == 4);
}

TEST_CASE("commuting tuples are covariant for the symmetric system, non-commuting ones are not") {
    oracle::Gen gen(9);
    const auto sys = build_symmetric(2, 4);
    CHECK(check_representation(RepTuple(sys, gen.commuting(2, 3, 1.0))).verdict);

    Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
    a(1, 0) = 0.5;
    b(0, 1) = 0.5;
    const auto cov = check_representation(RepTuple(sys, {a, b}));
    CHECK_FALSE(cov.verdict);
    // The level-2 residual is T(p_2^perp) on the antisymmetric vector: ||[a, b]|| / sqrt 2.
    const double comm = oracle::opnorm(a * b - b * a) / std::sqrt(2.0);
    CHECK(cov.residuals[2] == doctest::Approx(comm).epsilon(1e-9));
}

TEST_CASE("nilpotent relation for the one-letter ideal") {
    const auto sys = build_from_ideal(1, {{2, Vec::Ones(1)}}, 3);
    Mat t = Mat::Zero(2, 2);
    t(1, 0) = 1.0;
    CHECK(check_representation(RepTuple(sys, {t})).verdict);
    Mat u = Mat::Zero(3, 3);
    u(1, 0) = u(2, 1) = 1.0;  // u^2 != 0
    CHECK_FALSE(check_representation(RepTuple(sys, {u})).verdict);
}

TEST_CASE("row norm and complete contractivity") {
    const auto sys = build_full(2, 2);
    Mat a = Mat::Identity(2, 2) * 0.6, b = Mat::Identity(2, 2) * 0.8;
    const auto rn = row_norm(RepTuple(sys, {a, b}));
    CHECK(rn.value == doctest::Approx(1.0));
    CHECK(rn.completely_contractive);
    CHECK_FALSE(row_norm(RepTuple(sys, {a, 2 * b})).completely_contractive);
}

TEST_CASE("classification of elementary tuples") {
    const auto full = build_full(2, 8);
    Mat half = Mat::Constant(1, 1, 0.5), zero = Mat::Zero(1, 1);
    const auto c1 = classify(RepTuple(full, {half, zero}));
    CHECK(c1.pure);
    CHECK_FALSE(c1.fully_coisometric);
    CHECK_FALSE(c1.isometric);

    const auto sym = build_symmetric(2, 6);
    Mat s1 = Mat::Constant(1, 1, 0.6), s2 = Mat::Constant(1, 1, cd(0.0, 0.8));
    const auto c2 = classify(RepTuple(sym, {s1, s2}));
    CHECK(c2.fully_coisometric);
    CHECK_FALSE(c2.pure);
    CHECK(c2.q_norm == doctest::Approx(1.0));

    oracle::Gen gen(3);
    const auto line = build_full(1, 6);
    const auto c3 = classify(RepTuple(line, {gen.unitary(3)}));
    CHECK(c3.isometric);
    CHECK(c3.fully_coisometric);
}

TEST_CASE("row grams decrease with the level (property)") {
    oracle::Gen gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = gen.integer(1, 3);
        const Index h = gen.integer(1, 4);
        const auto sys = trial % 2 ? build_symmetric(d, 5) : build_full(d, 5);
        const auto ts = trial % 2 ? gen.commuting(d, h, 1.0) : gen.row_contraction(d, h, 1.0);
        const auto adj = t_tilde_adjoints(RepTuple(sys, ts), 5);
        for (int n = 0; n < 5; ++n) {
            const Mat diff = gram_of_adjoint(adj[n]) - gram_of_adjoint(adj[n + 1]);
            CHECK(min_eigenvalue(diff) >= -1e-10);
        }
    }
}

TEST_CASE("phi maps the identity to the first row gram") {
    oracle::Gen gen(4);
    const auto sys = build_full(3, 2);
    const auto ts = gen.row_contraction(3, 2, 0.7);
    const RepTuple rep(sys, ts);
    CHECK(oracle::opnorm(phi(rep, Mat::Identity(2, 2)) - oracle::Gen::row_gram(ts)) <= 1e-14);
}

TEST_CASE("tuple validation") {
    const auto sys = build_full(2, 2);
    CHECK_THROWS_AS(RepTuple(sys, {Mat::Identity(2, 2)}), InputError);
    CHECK_THROWS_AS(RepTuple(sys, {Mat::Identity(2, 2), Mat::Identity(3, 3)}), InputError);
}

}  // TEST_SUITE
