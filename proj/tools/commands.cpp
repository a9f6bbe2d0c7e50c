#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewdisc/baselines.hpp"
#include "loewdisc/model_io.hpp"
#include "loewdisc/pipeline.hpp"

namespace loewdisc::cli {

using nlohmann::json;
using io::format_number;

namespace {

const char* stabilization_name(Stabilization s) {
    switch (s) {
        case Stabilization::nehari:
            return "nehari";
        case Stabilization::l2:
            return "l2";
        case Stabilization::none:
            return "none";
    }
    return "?";
}

// Everything a command needs once the inputs are read.
struct Setup {
    std::optional<ContinuousModel> g;
    std::optional<FrequencyDataSet> data;  // imported, or sampled when export is requested
    double h = 0.0;
};

Setup prepare(RunConfig& cfg) {
    Setup s;
    if (!cfg.data.empty()) {
        FrequencyDataSet d = io::dataset_from_csv(io::read_file(cfg.data));
        if (cfg.h && std::abs(*cfg.h - d.h) > 1e-12 * d.h) {
            throw InvalidArgument("--h " + format_number(*cfg.h) + " disagrees with the data set period " +
                                  format_number(d.h));
        }
        cfg.h = d.h;
        s.data = std::move(d);
    }
    resolve(cfg);
    s.h = *cfg.h;
    if (!cfg.model.empty()) {
        io::AnyModel any;
        if (cfg.model == "paper-ex1") {
            any = example_resonant_plant();
        } else if (cfg.model == "paper-tds") {
            any = example_delay_plant();
        } else {
            any = io::load_model(cfg.model);
        }
        s.g = io::as_continuous(any);
    }
    return s;
}

LoewnerOptions loewner_options(const RunConfig& cfg) {
    LoewnerOptions o;
    o.m = cfg.m;
    o.k_bar = cfg.k_bar;
    o.rank_tol = cfg.rank_tol;
    o.stabilization = cfg.stabilization;
    return o;
}

const ContinuousStateSpace& state_space_for(const Setup& s, const std::string& method) {
    const auto* css = s.g ? std::get_if<ContinuousStateSpace>(&*s.g) : nullptr;
    if (css == nullptr) {
        throw Unsupported("method '" + method +
                          "' needs a delay-free state-space model; only loewner works from frequency data or "
                          "time-delay models");
    }
    return *css;
}

struct Discretized {
    DiscreteStateSpace model;
    std::optional<LoewnerDiscretization> loewner;
    double node_residual = std::nan("");
};

const FrequencyDataSet& dataset(Setup& s, const RunConfig& cfg) {
    if (!s.data) {
        s.data = build_dataset(*s.g, s.h, cfg.m);
    }
    return *s.data;
}

Discretized discretize_with(Setup& s, const RunConfig& cfg, const std::string& method) {
    Discretized out;
    if (method == "tustin") {
        out.model = tustin(state_space_for(s, method), s.h);
    } else if (method == "zoh") {
        out.model = zoh(state_space_for(s, method), s.h);
    } else if (method == "impulse") {
        out.model = impulse_invariant(state_space_for(s, method), s.h);
    } else if (method == "loewner") {
        const FrequencyDataSet& data = dataset(s, cfg);
        out.loewner = loewner_discretize(data, loewner_options(cfg));
        out.model = out.loewner->model;
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < data.nodes.size(); ++i) {
            worst = std::max(worst, std::abs(eval_discrete(out.loewner->interpolant, data.nodes[i]) - data.values[i]));
            scale = std::max(scale, std::abs(data.values[i]));
        }
        out.node_residual = scale > 0.0 ? worst / scale : worst;
    } else {
        throw InvalidArgument("unknown method '" + method + "' (expected tustin, zoh, impulse or loewner)");
    }
    return out;
}

ErrorReport error_of(Setup& s, const RunConfig& cfg, const DiscreteStateSpace& gd) {
    if (s.g) {
        return freq_error(*s.g, gd, error_grid(s.h, cfg.grid_points));
    }
    return dataset_error(*s.data, gd);
}

json report_json(const ErrorReport& r) {
    return {{"e_inf", r.e_inf},
            {"e_inf_rel", r.e_inf_rel},
            {"argmax_omega", r.argmax_omega},
            {"h_inf_norm_G", r.h_inf_norm_G},
            {"grid_points", r.grid_points},
            {"grid_min", r.grid_min},
            {"grid_max", r.grid_max},
            {"normalizer_grid", r.normalizer_grid}};
}

std::string config_line(const RunConfig& cfg) { return "# config: " + to_json(cfg).dump() + "\n"; }

struct Response {
    std::vector<double> t, y_continuous, y_held;
};

std::string default_signal(const Setup& s) {
    return s.g && std::holds_alternative<TimeDelayModel>(*s.g) ? "step" : "impulse";
}

Response simulate(const Setup& s, const RunConfig& cfg, const DiscreteStateSpace& gd, const std::string& signal) {
    if (!s.g) {
        throw Unsupported("time responses need a continuous model, not only frequency data");
    }
    const double dt = *cfg.dt;
    const std::size_t p = subdivision(s.h, dt);
    const auto n = static_cast<std::size_t>(std::floor(cfg.t_end / dt + 1e-9)) + 1;
    Response r;
    r.t = uniform_grid(dt, n);
    const std::size_t samples = (n - 1) / p + 1;
    if (signal == "impulse") {
        const auto* css = std::get_if<ContinuousStateSpace>(&*s.g);
        if (css == nullptr) {
            throw Unsupported("impulse reference is only available for delay-free state-space models; use --signal step");
        }
        r.y_continuous = impulse_response_continuous(*css, r.t);
        // Discrete impulse of area one: u_d[0] = 1/h.
        std::vector<double> y_d = impulse_response_discrete(gd, samples);
        for (double& v : y_d) {
            v /= s.h;
        }
        r.y_held = hold(y_d, s.h, dt, n);
    } else if (signal == "step") {
        if (const auto* css = std::get_if<ContinuousStateSpace>(&*s.g)) {
            r.y_continuous = step_response_continuous(*css, r.t);
        } else if (const auto* tds = std::get_if<TimeDelayModel>(&*s.g)) {
            r.y_continuous = step_response_tds(*tds, r.t.back() + 0.5 * dt, dt);
            r.y_continuous.resize(n, r.y_continuous.empty() ? 0.0 : r.y_continuous.back());
        } else {
            throw Unsupported("step reference is not available for this model type");
        }
        const std::vector<double> u(n, 1.0);
        r.y_held = sample_and_hold_output(gd, u, dt);
    } else {
        throw InvalidArgument("unknown signal '" + signal + "' (expected impulse or step)");
    }
    return r;
}

double e2_of(const Response& r) {
    try {
        return time_error_l2(r.y_continuous, r.y_held);
    } catch (const Error&) {
        return std::nan("");
    }
}

std::vector<std::string> methods_or(const RunConfig& cfg, std::vector<std::string> fallback) {
    return cfg.methods.empty() ? fallback : cfg.methods;
}

void check_methods(const std::vector<std::string>& methods) {
    for (const auto& m : methods) {
        if (m != "tustin" && m != "zoh" && m != "impulse" && m != "loewner") {
            throw InvalidArgument("unknown method '" + m + "' (expected tustin, zoh, impulse or loewner)");
        }
    }
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

Stabilization parse_stabilization(const std::string& name) {
    if (name == "nehari") {
        return Stabilization::nehari;
    }
    if (name == "l2") {
        return Stabilization::l2;
    }
    if (name == "none") {
        return Stabilization::none;
    }
    throw InvalidArgument("unknown stabilisation '" + name + "' (expected nehari, l2 or none)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

void apply_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) {
        throw InvalidArgument("config file must hold a JSON object");
    }
    for (const auto& [key, v] : j.items()) {
        const char* k = key.c_str();
        if (key == "model") {
            cfg.model = get_as<std::string>(v, k);
        } else if (key == "h") {
            cfg.h = get_as<double>(v, k);
        } else if (key == "m") {
            cfg.m = get_as<std::size_t>(v, k);
        } else if (key == "kbar") {
            cfg.k_bar = get_as<long>(v, k);
        } else if (key == "rank_tol") {
            cfg.rank_tol = get_as<double>(v, k);
        } else if (key == "grid") {
            cfg.grid_points = get_as<std::size_t>(v, k);
        } else if (key == "stabilize") {
            cfg.stabilization = parse_stabilization(get_as<std::string>(v, k));
        } else if (key == "method") {
            cfg.methods = v.is_string() ? split_list(v.get<std::string>()) : get_as<std::vector<std::string>>(v, k);
            if (cfg.methods.empty()) {
                throw InvalidArgument("method list is empty");
            }
        } else if (key == "out") {
            cfg.out = get_as<std::string>(v, k);
        } else if (key == "signal") {
            cfg.signal = get_as<std::string>(v, k);
        } else if (key == "t_end") {
            cfg.t_end = get_as<double>(v, k);
        } else if (key == "dt") {
            cfg.dt = get_as<double>(v, k);
        } else if (key == "k_min") {
            cfg.k_min = get_as<long>(v, k);
        } else if (key == "k_max") {
            cfg.k_max = get_as<long>(v, k);
        } else if (key == "data") {
            cfg.data = get_as<std::string>(v, k);
        } else if (key == "export_data") {
            cfg.export_data = get_as<std::string>(v, k);
        } else if (key == "seed") {
            cfg.seed = get_as<long>(v, k);
        } else {
            throw InvalidArgument("unknown config key '" + key + "'");
        }
    }
}

void resolve(RunConfig& cfg) {
    if (cfg.model.empty() && cfg.data.empty()) {
        throw InvalidArgument("--model (a file, paper-ex1 or paper-tds) or --data is required");
    }
    if (!cfg.h) {
        if (cfg.model == "paper-ex1") {
            cfg.h = 0.4;
        } else if (cfg.model == "paper-tds") {
            cfg.h = 0.2;
        } else {
            throw InvalidArgument("--h is required for a model file");
        }
    }
    if (!(*cfg.h > 0.0) || !std::isfinite(*cfg.h)) {
        throw InvalidArgument("--h must be positive");
    }
    if (cfg.m < 1) {
        throw InvalidArgument("--m must be at least 1");
    }
    if (cfg.k_bar < 1) {
        throw InvalidArgument("--kbar must be at least 1");
    }
    if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0)) {
        throw InvalidArgument("--rank-tol must lie in (0, 1)");
    }
    if (cfg.grid_points < 2) {
        throw InvalidArgument("--grid must be at least 2");
    }
    if (!(cfg.t_end > 0.0)) {
        throw InvalidArgument("--t-end must be positive");
    }
    if (!cfg.dt) {
        cfg.dt = *cfg.h / 100.0;
    }
    if (!(*cfg.dt > 0.0)) {
        throw InvalidArgument("--dt must be positive");
    }
    if (cfg.k_min < 0 || cfg.k_max < 0 || (cfg.k_max > 0 && cfg.k_min > cfg.k_max)) {
        throw InvalidArgument("sweep range must satisfy 0 <= k-min <= k-max");
    }
}

json to_json(const RunConfig& cfg) {
    json j{{"model", cfg.model},
           {"m", cfg.m},
           {"kbar", cfg.k_bar},
           {"rank_tol", cfg.rank_tol},
           {"grid", cfg.grid_points},
           {"stabilize", stabilization_name(cfg.stabilization)},
           {"method", cfg.methods},
           {"signal", cfg.signal},
           {"t_end", cfg.t_end},
           {"k_min", cfg.k_min},
           {"k_max", cfg.k_max},
           {"data", cfg.data},
           {"seed", cfg.seed}};
    j["h"] = cfg.h ? json(*cfg.h) : json(nullptr);
    j["dt"] = cfg.dt ? json(*cfg.dt) : json(nullptr);
    return j;
}

Artifacts cmd_discretize(RunConfig cfg) {
    Setup s = prepare(cfg);
    const auto methods = methods_or(cfg, {"loewner"});
    check_methods(methods);
    if (methods.size() != 1) {
        throw InvalidArgument("discretize takes exactly one method");
    }
    const std::string& method = methods.front();
    cfg.methods = methods;
    const Discretized d = discretize_with(s, cfg, method);
    const ErrorReport err = error_of(s, cfg, d.model);

    json model = io::to_json(d.model);
    model["config"] = to_json(cfg);

    json report{{"config", to_json(cfg)},
                {"method", method},
                {"order", d.model.order()},
                {"stable", is_stable(d.model)},
                {"error", report_json(err)}};
    std::ostringstream log;
    if (d.loewner) {
        const auto& l = *d.loewner;
        report["loewner"] = {{"r", l.r},
                             {"r_col", l.rank.r_col},
                             {"k", l.k},
                             {"interpolant_stable", l.interpolant_stable},
                             {"projection_error", l.projection_error},
                             {"estimated_error", l.estimated_error},
                             {"node_residual", d.node_residual}};
        report["log"] = l.log;
        for (const auto& line : l.log) {
            log << line << "\n";
        }
    }
    log << method << ": order " << d.model.order() << ", " << (is_stable(d.model) ? "stable" : "unstable")
        << ", relative error " << format_number(err.e_inf_rel) << " %\n";

    Artifacts a;
    a.files.emplace_back("model.json", model.dump(2) + "\n");
    a.files.emplace_back("report.json", report.dump(2) + "\n");
    a.files.emplace_back("log.txt", log.str());
    if (!cfg.export_data.empty()) {
        a.files.emplace_back(cfg.export_data, io::dataset_to_csv(dataset(s, cfg)));
    }
    a.summary = log.str();
    return a;
}

Artifacts cmd_compare(RunConfig cfg) {
    Setup s = prepare(cfg);
    cfg.methods = methods_or(cfg, {"tustin", "zoh", "impulse", "loewner"});
    check_methods(cfg.methods);
    const bool with_e2 = !cfg.signal.empty() && cfg.signal != "none";

    std::ostringstream csv, summary;
    csv << config_line(cfg);
    csv << "method,order,stable,e_inf,e_rel,argmax_omega" << (with_e2 ? ",e2" : "") << "\n";
    for (const auto& method : cfg.methods) {
        const Discretized d = discretize_with(s, cfg, method);
        const ErrorReport err = error_of(s, cfg, d.model);
        csv << method << ',' << d.model.order() << ',' << (is_stable(d.model) ? 1 : 0) << ','
            << format_number(err.e_inf) << ',' << format_number(err.e_inf_rel) << ','
            << format_number(err.argmax_omega);
        summary << method << ": order " << d.model.order() << ", e_rel " << format_number(err.e_inf_rel) << " %";
        if (with_e2) {
            const double e2 = e2_of(simulate(s, cfg, d.model, cfg.signal));
            csv << ',' << format_number(e2);
            summary << ", e2 " << format_number(e2) << " %";
        }
        csv << "\n";
        summary << "\n";
    }
    Artifacts a;
    a.files.emplace_back("compare.csv", csv.str());
    a.summary = summary.str();
    return a;
}

Artifacts cmd_sweep(RunConfig cfg) {
    Setup s = prepare(cfg);
    if (!s.g) {
        throw Unsupported("sweep needs a continuous model to measure errors against");
    }
    SweepOptions so;
    so.m = cfg.m;
    so.rank_tol = cfg.rank_tol;
    so.grid_points = cfg.grid_points;
    so.stabilization = cfg.stabilization;
    std::vector<Eigen::Index> ks;
    if (cfg.k_max > 0) {
        for (long k = std::max(1L, cfg.k_min); k <= cfg.k_max; ++k) {
            ks.push_back(k);
        }
    }
    const SweepResult sw = order_sweep(*s.g, s.h, ks, so);

    std::ostringstream csv, summary;
    csv << config_line(cfg);
    csv << "# r = " << sw.r << "\n";
    csv << "# h_inf_norm_G = " << format_number(sw.h_inf_norm_G) << "\n";
    csv << "k,e_rel_unproj,e_rel_proj,stable_unproj,order_proj,gap_to_exact,status\n";
    summary << "r = " << sw.r << "\n";
    for (const auto& row : sw.rows) {
        if (row.k < cfg.k_min) {
            continue;
        }
        std::string status = row.ok ? "ok" : row.failure;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        csv << row.k << ',' << format_number(row.e_rel_unproj) << ',' << format_number(row.e_rel_proj) << ','
            << (row.stable_unproj ? 1 : 0) << ',' << row.order_proj << ',' << format_number(row.gap_to_exact) << ','
            << status << "\n";
        summary << "k = " << row.k << ": " << format_number(row.e_rel_unproj) << " % -> "
                << format_number(row.e_rel_proj) << " % (order " << row.order_proj << ")"
                << (row.ok ? "" : " failed: " + row.failure) << "\n";
    }
    Artifacts a;
    a.files.emplace_back("sweep.csv", csv.str());
    a.summary = summary.str();
    return a;
}

Artifacts cmd_respond(RunConfig cfg) {
    Setup s = prepare(cfg);
    cfg.methods = methods_or(cfg, {"loewner"});
    check_methods(cfg.methods);
    if (cfg.signal.empty() || cfg.signal == "none") {
        cfg.signal = default_signal(s);
    }
    Artifacts a;
    std::ostringstream summary;
    for (const auto& method : cfg.methods) {
        const Discretized d = discretize_with(s, cfg, method);
        const Response r = simulate(s, cfg, d.model, cfg.signal);
        const double e2 = e2_of(r);
        std::ostringstream csv;
        csv << config_line(cfg);
        csv << "# method = " << method << ", e2 = " << format_number(e2) << "\n";
        csv << "t,y_continuous,y_held_discrete,error\n";
        for (std::size_t i = 0; i < r.t.size(); ++i) {
            csv << format_number(r.t[i]) << ',' << format_number(r.y_continuous[i]) << ','
                << format_number(r.y_held[i]) << ',' << format_number(r.y_continuous[i] - r.y_held[i]) << "\n";
        }
        a.files.emplace_back("response_" + method + ".csv", csv.str());
        summary << method << ": " << cfg.signal << " response, e2 " << format_number(e2) << " %\n";
    }
    a.summary = summary.str();
    return a;
}

Artifacts run(const std::string& command, RunConfig cfg) {
    if (command == "discretize") {
        return cmd_discretize(std::move(cfg));
    }
    if (command == "compare") {
        return cmd_compare(std::move(cfg));
    }
    if (command == "sweep") {
        return cmd_sweep(std::move(cfg));
    }
    if (command == "respond") {
        return cmd_respond(std::move(cfg));
    }
    throw InvalidArgument("unknown command '" + command + "'");
}

int exit_code(const Error& e) {
    switch (e.kind()) {
        case Error::Kind::usage:
        case Error::Kind::io:
            return 2;
        case Error::Kind::numeric:
            return 3;
        case Error::Kind::unsupported:
            return 4;
    }
    return 3;
}

}  // namespace loewdisc::cli
