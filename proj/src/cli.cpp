#include "subprod/cli.hpp"

#include "subprod/dilation.hpp"
#include "subprod/errors.hpp"
#include "subprod/random.hpp"
#include "subprod/structure.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace subprod {

namespace {

struct Section {
    int status = kExitOk;
    json body;
};

struct Context {
    const RunConfig& cfg;
    const json& doc;
    SystemPtr sys;
    std::optional<RepTuple> rep;
};

// Runs a section, turning library exceptions into statuses.
Section guarded(const std::function<Section()>& body) {
    try {
        return body();
    } catch (const CapacityError& e) {
        return {kExitCapacity, {{"error", e.what()}, {"error_kind", "capacity"}}};
    } catch (const InputError& e) {
        return {kExitInput, {{"error", e.what()}, {"error_kind", "input"}}};
    } catch (const ContractivityError& e) {
        return {kExitVerdict, {{"error", e.what()}, {"error_kind", "contractivity"}}};
    } catch (const PreconditionError& e) {
        return {kExitVerdict, {{"error", e.what()}, {"error_kind", "precondition"}}};
    } catch (const json::exception& e) {
        return {kExitInput, {{"error", e.what()}, {"error_kind", "input"}}};
    }
}

int worst(int a, int b) { return std::max(a, b); }

const RepTuple& need_rep(const Context& ctx) {
    if (!ctx.rep) throw InputError("input document has no 'representation'");
    return *ctx.rep;
}

// Highest level whose dense relative-isometry matrices stay small.
int relative_isometry_depth(const RepTuple& rep) {
    const auto& sys = rep.system();
    int up_to = 0;
    for (int n = 1; n <= std::min(sys.truncation(), 6); ++n)
        if (sys.rank(n) * rep.h() <= 512) up_to = n;
    return up_to;
}

Section cmd_check(Context& ctx) {
    const auto val = validate_system(*ctx.sys, ctx.cfg.tol_proj);
    json body;
    body["validation"] = {{"hermitian_residual", val.hermitian_residual},
                          {"idempotent_residual", val.idempotent_residual},
                          {"basis_residual", val.basis_residual},
                          {"compatibility_residual", val.compatibility_residual},
                          {"level_compatibility", real_list(val.level_compatibility)},
                          {"exact_norms", val.exact_norms},
                          {"verdict", val.verdict}};
    body["fiber_dims"] = json::array();
    for (Index r : ctx.sys->level_dims()) body["fiber_dims"].push_back(r);
    bool ok = val.verdict;
    if (ctx.rep) {
        const auto cov = check_representation(*ctx.rep, -1, ctx.cfg.tol);
        const auto rn = row_norm(*ctx.rep, ctx.cfg.tol);
        json bounded = json::array();
        for (bool b : cov.bounded) bounded.push_back(b);
        body["covariance"] = {{"residuals", real_list(cov.residuals)},
                              {"bounded_levels", bounded},
                              {"max_residual", cov.max_residual},
                              {"verdict", cov.verdict}};
        body["row_norm"] = {{"value", rn.value}, {"completely_contractive", rn.completely_contractive}};
        ok = ok && cov.verdict && rn.completely_contractive;
    }
    return {ok ? kExitOk : kExitVerdict, body};
}

Section cmd_classify(Context& ctx) {
    const RepTuple& rep = need_rep(ctx);
    const auto& sys = rep.system();
    const auto cls = classify(rep, ctx.cfg.tol, -1, ctx.cfg.tol_limit, ctx.cfg.n_cap);
    const auto rn = row_norm(rep, ctx.cfg.tol);
    const auto cov = check_representation(rep, -1, ctx.cfg.tol);
    const auto sph = spherical_check(rep, ctx.cfg.tol);

    json flags = {{"isometric", cls.isometric},
                  {"fully_coisometric", cls.fully_coisometric},
                  {"pure", cls.pure},
                  {"spherical", sph.verdict},
                  {"completely_contractive", rn.completely_contractive},
                  {"valid", cov.verdict}};
    json residuals = {{"isometric", cls.isometric_residual},
                      {"coisometric", cls.coisometric_residual},
                      {"q_norm", cls.q_norm},
                      {"row_norm", rn.value},
                      {"covariance", cov.max_residual},
                      {"partial_isometry_by_level", real_list(cls.partial_isometry_residuals)},
                      {"spherical_normality", real_list(sph.normal_residuals)},
                      {"spherical_commutators", real_list(sph.commutator_residuals)},
                      {"spherical_sum", sph.sum_residual}};
    json partial = json::array();
    for (int n : cls.partial_isometry_levels) partial.push_back(n);
    flags["partial_isometry_levels"] = partial;

    json sequences = json::object();
    if (rn.completely_contractive) {
        const auto rel = relative_isometry_check(rep, relative_isometry_depth(rep), ctx.cfg.tol);
        flags["relatively_isometric"] = rel.verdict;
        json levels = json::array();
        for (const auto& lv : rel.levels)
            levels.push_back({{"n", lv.n},
                              {"partial_isometry", lv.partial_isometry},
                              {"operator_condition", lv.operator_condition},
                              {"subspace_condition", lv.subspace_condition}});
        residuals["relative_isometry"] = {{"levels", levels},
                                          {"forms_agree", rel.forms_agree},
                                          {"failing_level", rel.failing_level}};
        if (sys.truncation() >= 2) {
            Rng rng(ctx.cfg.seed);
            const Vec h_vec = rng.unit_vector(rep.h());
            const int ell_max = std::min(sys.truncation(), 12);
            const auto lim = coisometric_limit_condition(rep, 1, Vec::Unit(sys.rank(1), 0), h_vec, ell_max,
                                                         ctx.cfg.tol, ctx.cfg.tol_limit);
            json ells = json::array();
            for (int l : lim.ell) ells.push_back(l);
            sequences = {{"m", lim.m},
                         {"ell", ells},
                         {"a_ell", real_list(lim.a_ell)},
                         {"gap", real_list(lim.gap)},
                         {"target", lim.target},
                         {"alt_target", lim.alt_target},
                         {"monotone", lim.monotone},
                         {"converged", lim.converged},
                         {"applicable", lim.applicable}};
        }
    } else {
        flags["relatively_isometric"] = false;
    }
    json body = {{"flags", flags},
                 {"residuals", residuals},
                 {"sequences", sequences},
                 {"convergence", {{"n", cls.limit_iterations}, {"converged", cls.limit_converged}}},
                 {"seed", ctx.cfg.seed}};
    const bool ok = cov.verdict && rn.completely_contractive;
    return {ok ? kExitOk : kExitVerdict, body};
}

Section cmd_poisson(Context& ctx) {
    const RepTuple& rep = need_rep(ctx);
    const int N = rep.system().truncation();
    const auto ids = verify_kernel_identities(rep, N, ctx.cfg.tol);
    const auto pk = poisson_kernel(rep, N, ctx.cfg.tol);
    json body = {{"N", N},
                 {"defect_rank", pk.defect.rank},
                 {"fock_dim", pk.fock.total_dim},
                 {"residual_1", ids.telescoping},
                 {"residual_2", ids.intertwining},
                 {"residual_2_by_level", real_list(ids.intertwining_by_level)},
                 {"isometry_gap", ids.isometry_gap},
                 {"verdict", ids.verdict}};
    if (ctx.cfg.dump_matrices) {
        json blocks = json::array();
        for (int n = 0; n <= N; ++n) blocks.push_back({{"level", n}, {"block", mat_to_json(pk.block(n))}});
        body["matrices"] = {{"delta_star", mat_to_json(pk.defect.delta_star)},
                            {"defect_basis", mat_to_json(pk.defect.defect_basis)},
                            {"kernel_blocks", blocks}};
    }
    return {ids.verdict ? kExitOk : kExitVerdict, body};
}

DilationOptions dilation_options(const RunConfig& cfg) {
    DilationOptions opts;
    opts.tol = cfg.tol;
    opts.tol_limit = cfg.tol_limit;
    opts.n_cap = cfg.n_cap;
    return opts;
}

json dilation_json(const DilationResult& dil, bool dump) {
    json body = {{"N", dil.N},
                 {"r_U", dil.r_U},
                 {"r_D", dil.r_D},
                 {"truncation_defect", dil.truncation_defect},
                 {"isometry_residual", dil.isometry_residual},
                 {"coisometry_residuals", real_list(dil.coisometry_residuals)},
                 {"covariance_residual", dil.covariance_residual},
                 {"intertwining_residual", dil.intertwining_residual},
                 {"dilation_residual", dil.dilation_residual},
                 {"v_coisometry_defect", dil.v_coisometry_defect},
                 {"verdict", dil.verdict}};
    if (dump) {
        json z = json::array();
        for (std::size_t n = 0; n < dil.Z_tilde.size(); ++n)
            z.push_back({{"level", n}, {"Z_tilde", mat_to_json(dil.Z_tilde[n])}});
        body["matrices"] = {{"W", mat_to_json(dil.W)},
                            {"W_fock_rows", dil.fock_rows()},
                            {"Q", mat_to_json(dil.Q)},
                            {"U_basis", mat_to_json(dil.U_basis)},
                            {"Y", mat_to_json(dil.Y)},
                            {"Z_tilde", z}};
    }
    return body;
}

Section cmd_dilate(Context& ctx) {
    const RepTuple& rep = need_rep(ctx);
    const auto dil = dilate(rep, -1, dilation_options(ctx.cfg));
    return {dil.verdict ? kExitOk : kExitVerdict, dilation_json(dil, ctx.cfg.dump_matrices)};
}

Section cmd_wold(Context& ctx) {
    const RepTuple& rep = need_rep(ctx);
    const auto w = wold(rep, -1, dilation_options(ctx.cfg));
    json body = {{"w_unitary", w.w_unitary},
                 {"unitary_residual", w.unitary_residual},
                 {"truncation_defect", w.truncation_defect},
                 {"induced_dim", w.induced_dim},
                 {"defect_rank", w.dilation.r_D},
                 {"coisometric_dim", w.coisometric_dim},
                 {"induced_part_present", w.induced_dim > 0},
                 {"coisometric_part_present", w.coisometric_dim > 0},
                 {"reconstruction_residual", w.reconstruction_residual},
                 {"dilation", dilation_json(w.dilation, false)}};
    if (ctx.cfg.dump_matrices) {
        json z = json::array();
        for (const auto& zi : w.Z) z.push_back(mat_to_json(zi));
        body["matrices"] = {{"W", mat_to_json(w.dilation.W)},
                            {"defect_basis", mat_to_json(w.defect_basis)},
                            {"Z", z}};
    }
    const bool ok = w.w_unitary && w.reconstruction_residual <= 10 * ctx.cfg.tol;
    return {ok ? kExitOk : kExitVerdict, body};
}

PolynomialX random_polynomial(Rng& rng, const SubproductSystem& sys, int max_level) {
    PolynomialX p;
    p.alpha = rng.complex_normal();
    for (int n = 1; n <= max_level; ++n) p.terms.push_back({n, rng.ginibre(sys.rank(n), 1)});
    return p;
}

Section cmd_vn(Context& ctx) {
    const RepTuple& rep = need_rep(ctx);
    const auto& sys = rep.system();
    const int N = sys.truncation();
    std::vector<VNPair> pairs;
    bool seeded = false;
    if (ctx.doc.contains("polynomials")) {
        for (const auto& pq : ctx.doc.at("polynomials"))
            pairs.push_back({polynomial_from_json(pq.at("p")), polynomial_from_json(pq.at("q"))});
    } else {
        seeded = true;
        Rng rng(ctx.cfg.seed);
        const int level = std::max(0, N / 2);
        for (int i = 0; i < 3; ++i)
            pairs.push_back({random_polynomial(rng, sys, level), random_polynomial(rng, sys, level)});
    }
    const auto r = vn_inequality_check(rep, pairs, N, ctx.cfg.tol);
    json depths = json::array();
    for (int dpt : r.depths) depths.push_back(dpt);
    json body = {{"lhs", r.lhs},
                 {"rhs", r.rhs},
                 {"depths", depths},
                 {"rhs_trend", real_list(r.rhs_trend)},
                 {"monotone", r.monotone},
                 {"verdict", r.verified ? "verified" : "inconclusive"},
                 {"pairs", pairs.size()},
                 {"seeded_samples", seeded}};
    return {r.verified && r.monotone ? kExitOk : kExitVerdict, body};
}

Section cmd_gram(Context& ctx) {
    const RepTuple& rep = need_rep(ctx);
    const auto& sys = rep.system();
    const int ell_max = std::min(sys.truncation(), 8);
    Rng rng(ctx.cfg.seed);
    const Vec x = rng.unit_vector(sys.rank(1) * rep.h());
    const Vec y = rng.unit_vector(sys.rank(1) * rep.h());
    const auto g = inductive_gram(rep, 1, x, 1, y, ell_max, ctx.cfg.tol);
    json ells = json::array();
    json values = json::array();
    for (int l : g.ell) ells.push_back(l);
    for (cd v : g.g) values.push_back(complex_to_json(v));
    json body = {{"n", g.n},
                 {"m", g.m},
                 {"ell", ells},
                 {"g", values},
                 {"increments", real_list(g.increments)},
                 {"composition_residual", g.composition_residual},
                 {"fully_coisometric", g.fully_coisometric},
                 {"seed", ctx.cfg.seed}};
    return {g.composition_residual <= ctx.cfg.tol ? kExitOk : kExitVerdict, body};
}

Section cmd_gauge(Context& ctx) {
    const auto& sys = *ctx.sys;
    std::vector<SMonomial> monos;
    if (ctx.doc.contains("monomials")) {
        for (const auto& m : ctx.doc.at("monomials")) monos.push_back(monomial_from_json(m));
    } else {
        Rng rng(ctx.cfg.seed);
        for (int i = 0; i < 3; ++i) {
            SMonomial m;
            for (int f = 0; f < 2; ++f) {
                const int n = rng.uniform_int(0, std::min(2, sys.truncation()));
                m.factors.push_back({rng.uniform_int(0, 1) == 1, n, rng.ginibre(sys.rank(n), 1)});
            }
            monos.push_back(std::move(m));
        }
    }
    json items = json::array();
    bool ok = true;
    for (const auto& m : monos) {
        const auto g = gauge_grading_check(sys, m, cd(0.0, 1.0), -1, 1e-10);
        items.push_back({{"degree", g.degree}, {"residual", g.residual}, {"exact_columns", g.exact_columns},
                         {"verdict", g.verdict}});
        ok = ok && g.verdict;
    }
    return {ok ? kExitOk : kExitVerdict, {{"lambda", complex_to_json(cd(0.0, 1.0))}, {"monomials", items}}};
}

Section cmd_quotient(Context& ctx) {
    const auto q = quotient_compression_check(*ctx.sys, -1, ctx.cfg.tol_proj);
    json ideal = json::array(), direct = json::array();
    for (Index r : q.ideal_ranks) ideal.push_back(r);
    for (Index r : q.direct_ranks) direct.push_back(r);
    json body = {{"compression_residual", q.compression_residual},
                 {"ideal_span_gap", q.ideal_span_gap},
                 {"ideal_ranks", ideal},
                 {"direct_ranks", direct},
                 {"ranks_match", q.ranks_match},
                 {"generator_compression", q.generator_compression},
                 {"coset_distance_semantics", "compression at finite depth; lower estimate, equal in the limit"},
                 {"verdict", q.verdict}};
    return {q.verdict ? kExitOk : kExitVerdict, body};
}

using Command = Section (*)(Context&);

Command lookup(const std::string& name) {
    if (name == "check") return cmd_check;
    if (name == "classify") return cmd_classify;
    if (name == "poisson") return cmd_poisson;
    if (name == "dilate") return cmd_dilate;
    if (name == "wold") return cmd_wold;
    if (name == "vn") return cmd_vn;
    if (name == "gram") return cmd_gram;
    return nullptr;
}

json envelope(const RunConfig& cfg) {
    return {{"tool", {{"name", "subprod"}, {"version", kToolVersion}}}, {"command", cfg.command},
            {"config", config_to_json(cfg)}};
}

}  // namespace

json config_to_json(const RunConfig& c) {
    json j = {{"input", c.input_path}, {"command", c.command}, {"tol_proj", c.tol_proj}, {"tol", c.tol},
              {"tol_limit", c.tol_limit}, {"n_cap", c.n_cap}, {"seed", c.seed}, {"capacity", c.capacity},
              {"dump_matrices", c.dump_matrices}};
    j["truncation"] = c.truncation ? json(*c.truncation) : json(nullptr);
    return j;
}

CommandResult run_on_document(const RunConfig& cfg, const json& doc) {
    CommandResult result;
    result.report = envelope(cfg);
    if (!(cfg.tol > 0 && cfg.tol_proj > 0 && cfg.tol_limit > 0) || cfg.n_cap < 1 ||
        (cfg.truncation && *cfg.truncation < 1)) {
        result.exit_code = kExitInput;
        result.report["error"] = "tolerances must be positive, n_cap and truncation at least 1";
        result.report["exit_code"] = result.exit_code;
        return result;
    }
    const bool is_report = cfg.command == "report";
    if (!is_report && !lookup(cfg.command)) {
        result.exit_code = kExitInput;
        result.report["error"] = "unknown command '" + cfg.command + "'";
        result.report["exit_code"] = result.exit_code;
        return result;
    }

    Context ctx{cfg, doc, nullptr, std::nullopt};
    Section setup = guarded([&]() -> Section {
        if (!doc.is_object() || !doc.contains("system")) throw InputError("input document needs a 'system' object");
        BuildOptions opts;
        opts.capacity = cfg.capacity;
        ctx.sys = system_from_json(doc.at("system"), opts, cfg.truncation);
        if (doc.contains("representation")) ctx.rep.emplace(representation_from_json(doc.at("representation"), ctx.sys));
        return {kExitOk, json::object()};
    });
    if (setup.status != kExitOk) {
        result.exit_code = setup.status;
        result.report["error"] = setup.body.at("error");
        result.report["exit_code"] = result.exit_code;
        return result;
    }
    result.report["system"] = system_to_json(*ctx.sys);
    result.report["system"].erase("projections");

    if (!is_report) {
        Section s = guarded([&] { return lookup(cfg.command)(ctx); });
        result.exit_code = s.status;
        result.report["result"] = s.body;
    } else {
        json sections = json::object();
        std::vector<std::pair<std::string, Command>> plan = {{"check", cmd_check}};
        if (ctx.rep) {
            plan.insert(plan.end(), {{"classify", cmd_classify}, {"poisson", cmd_poisson}, {"dilate", cmd_dilate},
                                     {"wold", cmd_wold}, {"vn", cmd_vn}, {"gram", cmd_gram}});
        }
        plan.push_back({"gauge", cmd_gauge});
        if (ctx.sys->kind() == SystemKind::ideal || ctx.sys->kind() == SystemKind::q_commuting)
            plan.push_back({"quotient", cmd_quotient});
        int code = kExitOk;
        json statuses = json::object();
        for (const auto& [name, fn] : plan) {
            Section s = guarded([&] { return fn(ctx); });
            // A refused Wold split is a classification outcome inside a full report.
            sections[name] = s.body;
            statuses[name] = s.status;
            if (name != "wold" || s.status != kExitVerdict) code = worst(code, s.status);
        }
        result.report["sections"] = sections;
        result.report["section_status"] = statuses;
        result.exit_code = code;
    }
    result.report["exit_code"] = result.exit_code;
    return result;
}

CommandResult run_command(const RunConfig& cfg) {
    std::ifstream in(cfg.input_path);
    if (!in) {
        CommandResult r;
        r.exit_code = kExitInput;
        r.report = envelope(cfg);
        r.report["error"] = "cannot read input file '" + cfg.input_path + "'";
        r.report["exit_code"] = r.exit_code;
        return r;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        CommandResult r;
        r.exit_code = kExitInput;
        r.report = envelope(cfg);
        r.report["error"] = std::string("malformed JSON: ") + e.what();
        r.report["exit_code"] = r.exit_code;
        return r;
    }
    return run_on_document(cfg, doc);
}

}  // namespace subprod
