// Config-driven scenario runner: operator zoo -> resolvent family ->
// biorthogonal system -> half-space -> perturbation -> verification report.
// Configs are TOML (see configs/ for the bundled set); reports are JSON with
// every number as a decimal string. Identical configs produce byte-identical
// reports apart from the timings block.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aihs/biorthogonal.hpp"
#include "aihs/report.hpp"
#include "aihs/resolvent_family.hpp"
#include "aihs/zoo.hpp"

namespace aihs {

struct StructureConfig {
    std::string orbit_vector;  // e* profile name; empty disables the orbit check
    Index orbit_horizon = 0;
    double orbit_delta = 1e-6;
    std::optional<bool> expect_minimal;
    std::optional<Index> expect_failing_index;

    Index chain_max_steps = 0;  // 0 disables
    std::optional<bool> expect_chain_artifact;

    std::vector<std::pair<Complex, double>> contours;  // riesz family
    Index riesz_nodes = 64;
    Index riesz_max_nodes = 1024;

    std::vector<Index> eigen_select;  // eigenpair positions for eigen_halfspace
};

struct ScenarioConfig {
    std::string name;
    std::string pipeline;  // defect_one | small_norm | bridge | structure
    std::uint64_t seed = 0;

    std::string operator_kind;
    Index dim = 1024;
    std::map<std::string, double> operator_extra;

    Complex boundary{1.0, 0.0};
    ApproachSchedule schedule{1.0, 0.25, 6};
    std::string estar = "auto";
    std::vector<std::string> estar_candidates;  // for estar = "auto"

    double eps = 0.1;
    SelectionOptions selection;

    bool bridge_declared_asymmetric = false;

    StructureConfig structure;

    std::map<std::string, double> tolerances;

    double tol(const std::string& key) const;  // ConfigInvalid when missing
};

// Parses and validates; throws ConfigInvalid with field-level messages.
ScenarioConfig load_scenario_config(const std::string& path);
ScenarioConfig parse_scenario_config(const std::string& toml_text, const std::string& origin);

struct ScenarioOverrides {
    std::optional<Index> dim;
    std::optional<double> eps;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, double>> tol_overrides;
};

void apply_overrides(ScenarioConfig& cfg, const ScenarioOverrides& ovr);

VerificationReport run_scenario(const ScenarioConfig& cfg);

// Catalogue listing for the CLI.
std::string zoo_listing(const std::string& filter = "");

}  // namespace aihs
