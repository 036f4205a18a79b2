// subprod: batch analysis of subproduct-system representations.

#include "subprod/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    subprod::RunConfig cfg;
    CLI::App app{"Analysis of representations of subproduct systems"};
    app.set_version_flag("--version", std::string(subprod::kToolVersion));
    app.require_subcommand(0, 1);

    int truncation = 0;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input_path, "combined system/representation JSON document")->required();
        sub->add_option("--out", cfg.output_path, "report path (default: standard output)");
        sub->add_option("--truncation", truncation, "override of the truncation level N");
        sub->add_option("--tol", cfg.tol, "tolerance of residual verdicts");
        sub->add_option("--tol-proj", cfg.tol_proj, "tolerance of projection checks");
        sub->add_option("--tol-limit", cfg.tol_limit, "stopping tolerance of limits");
        sub->add_option("--n-cap", cfg.n_cap, "iteration cap of limits");
        sub->add_option("--seed", cfg.seed, "seed of sampled inputs");
        sub->add_option("--capacity", cfg.capacity, "largest ambient dimension allowed");
        sub->add_flag("--dump-matrices", cfg.dump_matrices, "include kernels, W and Z in the report");
        sub->add_flag("--quiet", cfg.quiet, "suppress the summary line on standard error");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"check", "validate the system and the covariance of the tuple"},
        {"classify", "isometric, coisometric, pure, relatively isometric and spherical flags"},
        {"poisson", "Poisson kernel identities at truncation N"},
        {"wold", "Wold split into induced and fully coisometric parts"},
        {"dilate", "dilation W = [K; Y] and its residuals"},
        {"vn", "von Neumann inequality for polynomial pairs"},
        {"gram", "finite-level Grams of the coisometric dilation"},
        {"report", "every applicable section in one report"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub);
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : subprod::kExitInput;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return subprod::kExitInput;
    }
    for (const auto* sub : app.get_subcommands())
        if (sub->count("--truncation")) cfg.truncation = truncation;

    const auto result = subprod::run_command(cfg);
    const std::string text = result.report.dump(2) + "\n";
    if (cfg.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << cfg.output_path << "\n";
            return subprod::kExitInput;
        }
        out << text;
    }
    if (!cfg.quiet) std::cerr << cfg.command << ": exit " << result.exit_code << "\n";
    return result.exit_code;
}
