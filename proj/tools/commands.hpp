#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "loewdisc/error.hpp"
#include "loewdisc/stabilize.hpp"

namespace loewdisc::cli {

struct RunConfig {
    std::string model;             ///< file path, paper-ex1 or paper-tds
    std::optional<double> h;       ///< defaults to 0.4 / 0.2 for the built-in plants
    std::size_t m = 50;
    long k_bar = 10;
    double rank_tol = 1e-10;
    std::size_t grid_points = 5000;
    Stabilization stabilization = Stabilization::nehari;
    std::vector<std::string> methods;
    std::string out;
    std::string signal;            ///< impulse | step; empty means command default
    double t_end = 60.0;
    std::optional<double> dt;      ///< defaults to h / 100
    long k_min = 0;                ///< sweep range, 0 means 1 and r
    long k_max = 0;
    std::string data;              ///< import a data set CSV instead of sampling the model
    std::string export_data;       ///< also write the sampled data set
    long seed = 0;
};

/// Applies the keys of a JSON config object; unknown keys are usage errors.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

/// Fills the defaults that depend on the model and checks ranges.
void resolve(RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

Stabilization parse_stabilization(const std::string& name);
std::vector<std::string> split_list(const std::string& text);

/// Files produced by a command, in a fixed order, plus a human summary.
struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files;
    std::string summary;
};

Artifacts cmd_discretize(RunConfig cfg);
Artifacts cmd_compare(RunConfig cfg);
Artifacts cmd_sweep(RunConfig cfg);
Artifacts cmd_respond(RunConfig cfg);

Artifacts run(const std::string& command, RunConfig cfg);

int exit_code(const Error& e);

}  // namespace loewdisc::cli
