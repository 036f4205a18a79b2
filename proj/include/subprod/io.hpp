// io.hpp: JSON descriptors for systems, tuples, polynomials and monomials.
// Complex numbers are two-element arrays [re, im]; matrices are arrays of rows.

#pragma once

#include "subprod/inequalities.hpp"
#include "subprod/representation.hpp"

#include <json.hpp>

#include <optional>

namespace subprod {

using json = nlohmann::json;

cd complex_from_json(const json& j);
json complex_to_json(cd z);
Vec vec_from_json(const json& j);
json vec_to_json(const Vec& v);
Mat mat_from_json(const json& j);
json mat_to_json(const Mat& m);
json real_list(const std::vector<double>& xs);

// truncation, when given, replaces the descriptor's N (explicit systems keep
// the first truncation+1 projections).
SystemPtr system_from_json(const json& j, const BuildOptions& opts = {}, std::optional<int> truncation = {});
json system_to_json(const SubproductSystem& sys);

RepTuple representation_from_json(const json& j, const SystemPtr& sys);
json representation_to_json(const RepTuple& rep);

PolynomialX polynomial_from_json(const json& j);
json polynomial_to_json(const PolynomialX& p);
SMonomial monomial_from_json(const json& j);
json monomial_to_json(const SMonomial& m);

}  // namespace subprod
