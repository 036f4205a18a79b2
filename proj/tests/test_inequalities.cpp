#include "subprod/errors.hpp"
#include "subprod/inequalities.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace subprod;

namespace {

PolynomialX random_poly(oracle::Gen& gen, const SubproductSystem& sys, int level) {
    PolynomialX p;
    p.alpha = gen.gauss();
    for (int n = 1; n <= level; ++n) p.terms.push_back({n, gen.matrix(sys.rank(n), 1)});
    return p;
}

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("polynomials evaluate level by level") {
    const auto sys = build_full(2, 3);
    Mat a = Mat::Identity(2, 2) * 0.5, b = Mat::Zero(2, 2);
    b(0, 1) = 1.0;
    const RepTuple rep(sys, {a, b});
    PolynomialX p;
    p.alpha = 2.0;
    p.terms.push_back({2, basis_tensor(2, {0, 1})});
    CHECK(oracle::opnorm(eval_poly(rep, p) - (2.0 * Mat::Identity(2, 2) + a * b)) <= 1e-15);
    PolynomialX too_deep;
    too_deep.terms.push_back({4, Vec::Ones(16)});
    CHECK_THROWS_AS(eval_poly(rep, too_deep), InputError);
}

TEST_CASE("von Neumann inequality on random commuting contractions") {
    oracle::Gen gen(61);
    const auto sys = build_symmetric(2, 6);
    for (int trial = 0; trial < 8; ++trial) {
        const RepTuple rep(sys, gen.commuting(2, 3, gen.real(0.2, 1.0)));
        std::vector<VNPair> pairs;
        for (int k = 0; k < 2; ++k) pairs.push_back({random_poly(gen, *sys, 3), random_poly(gen, *sys, 3)});
        const auto r = vn_inequality_check(rep, pairs, 6);
        CHECK(r.verified);
        CHECK(r.monotone);
        CHECK(r.depths.front() == 3);
    }
}

TEST_CASE("von Neumann bound is attained by the shift itself") {
    // T = S restricted to levels 0..2 of the full one-letter Fock space is a
    // Jordan block; p(z) = z gives equality.
    const auto sys = build_full(1, 4);
    Mat j = Mat::Zero(3, 3);
    j(1, 0) = j(2, 1) = 1.0;
    PolynomialX p;
    p.terms.push_back({1, Vec::Ones(1)});
    const auto r = vn_inequality_check(RepTuple(sys, {j}), {{p, p}}, 4);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.verified);
}

TEST_CASE("von Neumann check rejects polynomials above half the truncation") {
    const auto sys = build_full(1, 3);
    PolynomialX p;
    p.terms.push_back({2, Vec::Ones(1)});
    CHECK_THROWS_AS(vn_inequality_check(RepTuple(sys, {Mat::Identity(1, 1)}), {{p, p}}, 3), InputError);
}

TEST_CASE("gauge grading of random monomials (property)") {
    oracle::Gen gen(62);
    const auto sys = build_symmetric(2, 6);
    for (int trial = 0; trial < 15; ++trial) {
        SMonomial mono;
        const int factors = gen.integer(1, 3);
        for (int f = 0; f < factors; ++f) {
            const int n = gen.integer(0, 2);
            mono.factors.push_back({gen.integer(0, 1) == 1, n, gen.unit(sys->rank(n))});
        }
        const auto g = gauge_grading_check(*sys, mono, gen.phase());
        CHECK(g.verdict);
        CHECK(g.exact_columns > 0);
    }
}

TEST_CASE("monomial degree and concatenation") {
    SMonomial a, b;
    a.factors.push_back({false, 2, Vec::Ones(1)});
    b.factors.push_back({true, 3, Vec::Ones(1)});
    CHECK(a.degree() == 2);
    CHECK(b.degree() == -3);
    CHECK(a.concat(b).degree() == -1);
    CHECK(a.concat(b).factors.size() == 2);
}

TEST_CASE("quotient compression for commutator and q-commuting ideals") {
    std::vector<Generator> gens{{2, Vec(basis_tensor(2, {0, 1}) - basis_tensor(2, {1, 0}))}};
    const auto sym = build_from_ideal(2, gens, 4);
    const auto q1 = quotient_compression_check(*sym);
    CHECK(q1.verdict);
    CHECK(q1.ranks_match);
    CHECK(q1.compression_residual <= 1e-12);

    const auto qc = build_q_commuting(2, Mat::Constant(2, 2, cd(0.0, 1.0)), 4);
    const auto q2 = quotient_compression_check(*qc);
    CHECK(q2.verdict);
    CHECK(q2.generator_compression <= 1e-12);
    CHECK_THROWS_AS(quotient_compression_check(*build_full(2, 2)), InputError);
}

TEST_CASE("cubic ideal generator compresses to zero while other monomials survive") {
    const Vec g = basis_tensor(2, {0, 0, 1});
    const auto sys = build_from_ideal(2, {{3, g}}, 5);
    SMonomial killed;
    killed.factors.push_back({false, 3, g});
    CHECK(coset_distance_estimate(*sys, killed, 5) <= 1e-12);
    SMonomial kept;
    kept.factors.push_back({false, 3, Vec(basis_tensor(2, {1, 1, 1}))});
    CHECK(coset_distance_estimate(*sys, kept, 5) == doctest::Approx(1.0));
}

}  // TEST_SUITE
