#include "subprod/io.hpp"

#include "subprod/errors.hpp"

namespace subprod {

cd complex_from_json(const json& j) {
    if (j.is_number()) return cd(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("complex numbers must be [re, im] arrays");
    return cd(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected a list of complex numbers");
    Vec v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
    return v;
}

json vec_to_json(const Vec& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("matrices must be non-empty lists of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Mat m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(j[r][c]);
    }
    return m;
}

json mat_to_json(const Mat& m) {
    json out = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

json real_list(const std::vector<double>& xs) {
    json out = json::array();
    for (double x : xs) out.push_back(x);
    return out;
}

SystemPtr system_from_json(const json& j, const BuildOptions& opts, std::optional<int> truncation) {
    if (!j.is_object()) throw InputError("system descriptor must be an object");
    if (!j.contains("kind") || !j.contains("d")) throw InputError("system descriptor needs 'kind' and 'd'");
    const SystemKind kind = system_kind_from_string(j.at("kind").get<std::string>());
    const int d = j.at("d").get<int>();
    if (kind == SystemKind::explicit_projections) {
        if (!j.contains("projections")) throw InputError("explicit systems need 'projections'");
        std::vector<Mat> ps;
        for (const auto& p : j.at("projections")) ps.push_back(mat_from_json(p));
        if (truncation) {
            if (*truncation + 1 > static_cast<int>(ps.size()))
                throw InputError("truncation exceeds the number of explicit projections");
            ps.resize(*truncation + 1);
        }
        return build_explicit(d, ps, opts);
    }
    if (!truncation && !j.contains("N")) throw InputError("system descriptor needs 'N'");
    const int N = truncation ? *truncation : j.at("N").get<int>();
    switch (kind) {
        case SystemKind::full: return build_full(d, N, opts);
        case SystemKind::symmetric: return build_symmetric(d, N, opts);
        case SystemKind::q_commuting: {
            if (!j.contains("q")) throw InputError("q_commuting systems need 'q'");
            const json& q = j.at("q");
            // Either one complex scalar for every pair or a full d x d matrix.
            const Mat qm = q.is_array() && !q.empty() && q[0].is_array() ? mat_from_json(q)
                                                                          : Mat::Constant(d, d, complex_from_json(q));
            return build_q_commuting(d, qm, N, opts);
        }
        case SystemKind::ideal: {
            std::vector<Generator> gens;
            for (const auto& g : j.value("generators", json::array()))
                gens.push_back({g.at("degree").get<int>(), vec_from_json(g.at("coords"))});
            return build_from_ideal(d, gens, N, opts);
        }
        case SystemKind::explicit_projections: break;
    }
    throw InputError("unsupported system kind");
}

json system_to_json(const SubproductSystem& sys) {
    json j;
    j["kind"] = to_string(sys.kind());
    j["d"] = sys.dim();
    j["N"] = sys.truncation();
    if (!sys.generators().empty()) {
        json gens = json::array();
        for (const auto& g : sys.generators()) gens.push_back({{"degree", g.degree}, {"coords", vec_to_json(g.coords)}});
        j["generators"] = gens;
    }
    if (sys.kind() == SystemKind::explicit_projections) {
        json ps = json::array();
        for (int n = 0; n <= sys.truncation(); ++n) ps.push_back(mat_to_json(sys.projection(n)));
        j["projections"] = ps;
    }
    return j;
}

RepTuple representation_from_json(const json& j, const SystemPtr& sys) {
    if (!j.is_object() || !j.contains("T")) throw InputError("representation descriptor needs 'T'");
    std::vector<Mat> ops;
    for (const auto& t : j.at("T")) ops.push_back(mat_from_json(t));
    if (j.contains("h")) {
        const Index h = j.at("h").get<Index>();
        for (const auto& t : ops)
            if (t.rows() != h) throw InputError("operator size does not match 'h'");
    }
    return RepTuple(sys, std::move(ops));
}

json representation_to_json(const RepTuple& rep) {
    json ts = json::array();
    for (const auto& t : rep.ops()) ts.push_back(mat_to_json(t));
    return {{"h", rep.h()}, {"T", ts}};
}

PolynomialX polynomial_from_json(const json& j) {
    PolynomialX p;
    if (j.contains("alpha")) p.alpha = complex_from_json(j.at("alpha"));
    for (const auto& t : j.value("terms", json::array()))
        p.terms.push_back({t.at("n").get<int>(), vec_from_json(t.at("coords"))});
    return p;
}

json polynomial_to_json(const PolynomialX& p) {
    json terms = json::array();
    for (const auto& t : p.terms) terms.push_back({{"n", t.n}, {"coords", vec_to_json(t.coords)}});
    return {{"alpha", complex_to_json(p.alpha)}, {"terms", terms}};
}

SMonomial monomial_from_json(const json& j) {
    SMonomial m;
    const json& factors = j.is_array() ? j : j.at("factors");
    for (const auto& f : factors)
        m.factors.push_back({f.value("adjoint", false), f.at("n").get<int>(), vec_from_json(f.at("coords"))});
    return m;
}

json monomial_to_json(const SMonomial& m) {
    json factors = json::array();
    for (const auto& f : m.factors)
        factors.push_back({{"adjoint", f.adjoint}, {"n", f.n}, {"coords", vec_to_json(f.coords)}});
    return {{"factors", factors}, {"degree", m.degree()}};
}

}  // namespace subprod
