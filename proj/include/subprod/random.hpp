// random.hpp: seeded generators for sample tuples, vectors and unitaries.

#pragma once

#include "subprod/linalg.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace subprod {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    int uniform_int(int lo, int hi);  // inclusive
    double normal();
    cd complex_normal();

    Mat ginibre(Index rows, Index cols);
    Vec unit_vector(Index n);
    Mat unitary(Index n);
    // Uniform on the unit circle.
    cd phase();

private:
    std::mt19937_64 engine_;
};

// Random d-tuple on C^h with ||T~_1|| = scale.
std::vector<Mat> random_row_contraction(Rng& rng, int d, Index h, double scale);

// Commuting tuple: T_i = U diag(lambda_i) U^* with independent eigenvalue rows,
// rescaled so that ||T~_1|| = scale. Normal, hence spherical at scale 1.
std::vector<Mat> random_commuting_normal(Rng& rng, int d, Index h, double scale);

// Commuting tuple: T_i = c_i0 I + c_i1 M + ... (polynomials in one matrix M),
// rescaled to ||T~_1|| = scale. Generally not normal.
std::vector<Mat> random_commuting_polynomial(Rng& rng, int d, Index h, double scale);

// Diagonal spherical tuple: each diagonal position gives a unit vector in C^d.
std::vector<Mat> random_spherical_diagonal(Rng& rng, int d, Index h);

}  // namespace subprod
