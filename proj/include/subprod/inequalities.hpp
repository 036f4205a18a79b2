// inequalities.hpp: polynomials over a subproduct system, the von Neumann
// inequality against the truncated shift, monomial degrees under the gauge
// action, and the compression identities of ideal quotients.

#pragma once

#include "subprod/representation.hpp"

#include <vector>

namespace subprod {

struct PolyTerm {
    int n = 0;
    Vec coords;  // fiber coordinates in X(n)
};

// alpha I + Sum_k T_{n_k}(zeta_k).
struct PolynomialX {
    cd alpha = 0.0;
    std::vector<PolyTerm> terms;

    int max_level() const;
};

struct MonomialFactor {
    bool adjoint = false;
    int n = 0;
    Vec coords;
};

// Ordered product of shifts and shift adjoints; the leftmost factor acts last.
struct SMonomial {
    std::vector<MonomialFactor> factors;

    int degree() const;
    SMonomial concat(const SMonomial& right) const;
};

Mat eval_poly(const RepTuple& rep, const PolynomialX& poly);
SpMat eval_poly_shift(const SubproductSystem& sys, const PolynomialX& poly, int N = -1);

struct VNPair {
    PolynomialX p, q;
};

struct VNReport {
    double lhs = 0.0;                // ||Sum p_i(T) q_i(T)^*||
    std::vector<int> depths;         // N' values
    std::vector<double> rhs_trend;   // ||Sum p_i(S) q_i(S)^*|| at depth N'
    double rhs = 0.0;
    double monotone_violation = 0.0; // largest drop of rhs_trend
    bool monotone = false;
    bool verified = false;           // lhs <= rhs + tol; otherwise inconclusive
};

VNReport vn_inequality_check(const RepTuple& rep, const std::vector<VNPair>& pairs, int N = -1, double tol = 1e-9);

// Product of the factors on the truncated Fock space of depth N.
SpMat eval_monomial(const SubproductSystem& sys, const SMonomial& mono, int N = -1);

struct GaugeReport {
    int degree = 0;
    double residual = 0.0;  // on columns whose path never leaves level N
    Index exact_columns = 0;
    bool verdict = false;
};

GaugeReport gauge_grading_check(const SubproductSystem& sys, const SMonomial& mono, cd lambda, int N = -1,
                                double tol = 1e-10);

struct QuotientReport {
    double compression_residual = 0.0;     // ||B^* S^full_n(B_n zeta) B - S^X_n(zeta)||
    double ideal_span_gap = 0.0;           // largest sin of principal angles, Y(k) vs direct span
    std::vector<Index> ideal_ranks;        // dim Y(k) from the system
    std::vector<Index> direct_ranks;       // dim of the span of shifted generators
    bool ranks_match = false;
    double generator_compression = 0.0;    // max ||P S^full(g) P|| over generators
    bool verdict = false;
};

QuotientReport quotient_compression_check(const SubproductSystem& sys, int N = -1, double tol = 1e-9);

// ||P A P|| for a monomial A in the shifts of the full system over the same
// letters, P the projection of F(E) onto F_X. At finite depth this is a lower
// estimate of the distance from A to the ideal; the two agree in the limit.
double coset_distance_estimate(const SubproductSystem& sys, const SMonomial& full_monomial, int N = -1);

}  // namespace subprod
