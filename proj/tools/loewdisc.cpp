// loewdisc: discretise continuous-time models by Loewner interpolation and
// compare against ZOH, Tustin and impulse-invariant baselines.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "loewdisc/model_io.hpp"

using namespace loewdisc;

namespace {

struct Flags {
    std::string config;
    std::string model, method, stabilize, out, signal, data, export_data;
    double h = 0.0, rank_tol = 0.0, t_end = 0.0, dt = 0.0;
    std::size_t m = 0, grid = 0;
    long kbar = 0, k_min = 0, k_max = 0, seed = 0;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; flags override its keys");
    sub->add_option("--model", f.model, "model JSON file, paper-ex1 or paper-tds");
    sub->add_option("--h", f.h, "sampling period in seconds");
    sub->add_option("--m", f.m, "2m interpolation frequencies (default 50)");
    sub->add_option("--kbar", f.kbar, "desired maximal order (default 10)");
    sub->add_option("--rank-tol", f.rank_tol, "relative numerical rank tolerance (default 1e-10)");
    sub->add_option("--grid", f.grid, "frequency error grid points (default 5000)");
    sub->add_option("--stabilize", f.stabilize, "nehari, l2 or none");
    sub->add_option("--method", f.method, "comma separated list of tustin, zoh, impulse, loewner");
    sub->add_option("--out", f.out, "output directory; without it artifacts go to stdout");
    sub->add_option("--signal", f.signal, "impulse or step (time-domain error)");
    sub->add_option("--t-end", f.t_end, "simulation horizon in seconds (default 60)");
    sub->add_option("--dt", f.dt, "fine time step, must divide h (default h/100)");
    sub->add_option("--k-min", f.k_min, "first order of a sweep");
    sub->add_option("--k-max", f.k_max, "last order of a sweep (default r)");
    sub->add_option("--data", f.data, "import a data set CSV instead of sampling the model");
    sub->add_option("--export-data", f.export_data, "write the sampled data set under this name");
    sub->add_option("--seed", f.seed, "recorded in the provenance only");
}

cli::RunConfig build_config(const CLI::App* sub, const Flags& f) {
    cli::RunConfig cfg;
    if (!f.config.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(io::read_file(f.config));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument("cannot parse config '" + f.config + "': " + e.what());
        }
        cli::apply_json(cfg, j);
    }
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--model")) cfg.model = f.model;
    if (given("--h")) cfg.h = f.h;
    if (given("--m")) cfg.m = f.m;
    if (given("--kbar")) cfg.k_bar = f.kbar;
    if (given("--rank-tol")) cfg.rank_tol = f.rank_tol;
    if (given("--grid")) cfg.grid_points = f.grid;
    if (given("--stabilize")) cfg.stabilization = cli::parse_stabilization(f.stabilize);
    if (given("--method")) {
        cfg.methods = cli::split_list(f.method);
        if (cfg.methods.empty()) {
            throw InvalidArgument("--method list is empty");
        }
    }
    if (given("--out")) cfg.out = f.out;
    if (given("--signal")) cfg.signal = f.signal;
    if (given("--t-end")) cfg.t_end = f.t_end;
    if (given("--dt")) cfg.dt = f.dt;
    if (given("--k-min")) cfg.k_min = f.k_min;
    if (given("--k-max")) cfg.k_max = f.k_max;
    if (given("--data")) cfg.data = f.data;
    if (given("--export-data")) cfg.export_data = f.export_data;
    if (given("--seed")) cfg.seed = f.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loewner-based discretisation of continuous-time LTI and time-delay models"};
    app.set_help_flag("--help", "print this help");  // -h would clash with --h
    app.require_subcommand(1);
    Flags flags;
    for (const char* name : {"discretize", "compare", "sweep", "respond"}) {
        add_flags(app.add_subcommand(name), flags);
    }
    app.get_subcommand("discretize")->description("run the full pipeline and write model.json, report.json, log.txt");
    app.get_subcommand("compare")->description("frequency (and optional time-domain) errors per method");
    app.get_subcommand("sweep")->description("errors of G_d^k and its stable projection versus k");
    app.get_subcommand("respond")->description("impulse or step responses against the continuous model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const cli::RunConfig cfg = build_config(sub, flags);
        const cli::Artifacts art = cli::run(sub->get_name(), cfg);
        if (cfg.out.empty()) {
            for (const auto& [name, text] : art.files) {
                if (art.files.size() > 1) {
                    std::cout << "==> " << name << " <==\n";
                }
                std::cout << text;
            }
            std::cerr << art.summary;
        } else {
            std::filesystem::create_directories(cfg.out);
            for (const auto& [name, text] : art.files) {
                io::write_file(std::filesystem::path(cfg.out) / name, text);
            }
            std::cout << art.summary;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code(e);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
