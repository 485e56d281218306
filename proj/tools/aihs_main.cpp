// Command-line front end: `run` executes a scenario config and writes the
// JSON report (exit 0 iff every residual passes), `zoo list` prints the
// operator catalogue with its structural facts.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "aihs/scenario.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_path,
            const aihs::ScenarioOverrides& ovr) {
    aihs::ScenarioConfig cfg = aihs::load_scenario_config(config_path);
    aihs::apply_overrides(cfg, ovr);
    const aihs::VerificationReport rep = aihs::run_scenario(cfg);
    const std::string text = rep.to_string();
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write report to " << out_path << "\n";
            return 2;
        }
        out << text;
        std::cout << (rep.pass() ? "PASS " : "FAIL ") << config_path << " -> " << out_path
                  << "\n";
    }
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for almost-invariant half-spaces of perturbed operators"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::vector<std::string> tol_overrides;
    aihs::ScenarioOverrides ovr;
    long long dim_override = -1;
    double eps_override = -1.0;
    long long seed_override = -1;

    auto* run = app.add_subcommand("run", "run a scenario config and emit the JSON report");
    run->add_option("--config", config_path, "scenario TOML file")->required();
    run->add_option("--out", out_path, "report path ('-' for stdout)");
    run->add_option("--dim", dim_override, "override truncation dimension D");
    run->add_option("--eps", eps_override, "override the perturbation norm budget");
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--tol-override", tol_overrides,
                    "override a tolerance, KEY=VALUE (repeatable)");

    auto* zoo = app.add_subcommand("zoo", "operator catalogue");
    std::string zoo_filter;
    auto* zoo_list = zoo->add_subcommand("list", "print the catalogue");
    zoo_list->add_option("filter", zoo_filter, "substring filter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (dim_override >= 0) ovr.dim = static_cast<aihs::Index>(dim_override);
            if (eps_override >= 0) ovr.eps = eps_override;
            if (seed_override >= 0) ovr.seed = static_cast<std::uint64_t>(seed_override);
            for (const auto& kv : tol_overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw aihs::ConfigInvalid("--tol-override expects KEY=VALUE, got " + kv);
                ovr.tol_overrides.emplace_back(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
            }
            return cmd_run(config_path, out_path, ovr);
        }
        if (zoo->parsed()) {
            std::cout << aihs::zoo_listing(zoo_filter);
            return 0;
        }
    } catch (const aihs::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
