#include "vaxopt/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "vaxopt/errors.hpp"

namespace vaxopt {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& prefix,
                         const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw ConfigError("config: unknown key '" + prefix + key + "'");
        }
    }
}

double read_number(const json& obj, const std::string& prefix, const std::string& key,
                   double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError("config: key '" + prefix + key + "' must be a number");
    }
    return v.get<double>();
}

int read_int(const json& obj, const std::string& prefix, const std::string& key,
             int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("config: key '" + prefix + key + "' must be an integer");
    }
    return v.get<int>();
}

bool read_bool(const json& obj, const std::string& prefix, const std::string& key,
               bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError("config: key '" + prefix + key + "' must be a boolean");
    }
    return v.get<bool>();
}

std::vector<double> read_number_list(const json& obj, const std::string& prefix,
                                     const std::string& key,
                                     const std::vector<double>& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) {
        throw ConfigError("config: key '" + prefix + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number()) {
            throw ConfigError("config: key '" + prefix + key + "' must contain only numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

json section(const json& doc, const std::string& key) {
    if (!doc.contains(key)) return json::object();
    const json& v = doc.at(key);
    if (!v.is_object()) {
        throw ConfigError("config: key '" + key + "' must be an object");
    }
    return v;
}

}  // namespace

AppConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top-level document must be an object");
    reject_unknown_keys(doc, "",
                        {"label", "params", "initial", "grid", "sweep", "analysis"});

    const json params_obj = section(doc, "params");
    reject_unknown_keys(params_obj, "params.",
                        {"beta", "sigma", "gamma", "delta", "alpha1", "alpha2", "eps1",
                         "eps2", "theta1", "theta2", "b1", "b2"});
    if (!params_obj.contains("theta1") || !params_obj.contains("theta2")) {
        throw ConfigError("config: params.theta1 and params.theta2 are required");
    }

    const double theta1 = read_number(params_obj, "params.", "theta1", 0.0);
    const double theta2 = read_number(params_obj, "params.", "theta2", 0.0);
    if (!(theta2 < theta1)) {
        throw ConfigError("config: constraint theta2 < theta1 violated (theta1 = " +
                          std::to_string(theta1) + ", theta2 = " + std::to_string(theta2) +
                          ")");
    }

    // Cost weights default to theta_i * 1e4; explicit overrides win.
    ModelParams p = ModelParams::with_default_costs(theta1, theta2);
    p.beta = read_number(params_obj, "params.", "beta", p.beta);
    p.sigma = read_number(params_obj, "params.", "sigma", p.sigma);
    p.gamma = read_number(params_obj, "params.", "gamma", p.gamma);
    p.delta = read_number(params_obj, "params.", "delta", p.delta);
    p.alpha1 = read_number(params_obj, "params.", "alpha1", p.alpha1);
    p.alpha2 = read_number(params_obj, "params.", "alpha2", p.alpha2);
    p.eps1 = read_number(params_obj, "params.", "eps1", p.eps1);
    p.eps2 = read_number(params_obj, "params.", "eps2", p.eps2);
    p.b1 = read_number(params_obj, "params.", "b1", p.b1);
    p.b2 = read_number(params_obj, "params.", "b2", p.b2);

    const json grid_obj = section(doc, "grid");
    reject_unknown_keys(grid_obj, "grid.", {"horizon_days", "dt"});
    p.horizon_days = read_number(grid_obj, "grid.", "horizon_days", 60.0);
    const double dt = read_number(grid_obj, "grid.", "dt", 0.1);

    const json initial_obj = section(doc, "initial");
    reject_unknown_keys(initial_obj, "initial.", {"s", "v1", "v2", "e", "i", "r"});
    StatePoint x0 = default_initial_state();
    x0.s = read_number(initial_obj, "initial.", "s", x0.s);
    x0.v1 = read_number(initial_obj, "initial.", "v1", x0.v1);
    x0.v2 = read_number(initial_obj, "initial.", "v2", x0.v2);
    x0.e = read_number(initial_obj, "initial.", "e", x0.e);
    x0.i = read_number(initial_obj, "initial.", "i", x0.i);
    x0.r = read_number(initial_obj, "initial.", "r", x0.r);

    const json sweep_obj = section(doc, "sweep");
    reject_unknown_keys(sweep_obj, "sweep.",
                        {"max_iterations", "convergence_tol", "relaxation", "enable_u1",
                         "enable_u2"});
    SweepConfig sweep;
    sweep.max_iterations = read_int(sweep_obj, "sweep.", "max_iterations", sweep.max_iterations);
    sweep.convergence_tol =
        read_number(sweep_obj, "sweep.", "convergence_tol", sweep.convergence_tol);
    sweep.relaxation = read_number(sweep_obj, "sweep.", "relaxation", sweep.relaxation);
    sweep.enable_u1 = read_bool(sweep_obj, "sweep.", "enable_u1", true);
    sweep.enable_u2 = read_bool(sweep_obj, "sweep.", "enable_u2", true);

    const json analysis_obj = section(doc, "analysis");
    reject_unknown_keys(analysis_obj, "analysis.",
                        {"activity_threshold", "theta1_sweep", "theta2_sweep",
                         "rate_probe_fraction"});
    AnalysisSettings analysis;
    analysis.activity_threshold = read_number(analysis_obj, "analysis.", "activity_threshold",
                                              analysis.activity_threshold);
    analysis.theta1_sweep =
        read_number_list(analysis_obj, "analysis.", "theta1_sweep", analysis.theta1_sweep);
    analysis.theta2_sweep =
        read_number_list(analysis_obj, "analysis.", "theta2_sweep", analysis.theta2_sweep);
    analysis.rate_probe_fraction = read_number(analysis_obj, "analysis.",
                                               "rate_probe_fraction",
                                               analysis.rate_probe_fraction);
    if (!(analysis.activity_threshold > 0.0 && analysis.activity_threshold < 1.0)) {
        throw ConfigError("config: analysis.activity_threshold must lie in (0, 1)");
    }
    if (!(analysis.rate_probe_fraction > 0.0 && analysis.rate_probe_fraction < 1.0)) {
        throw ConfigError("config: analysis.rate_probe_fraction must lie in (0, 1)");
    }

    std::string label;
    if (doc.contains("label")) {
        if (!doc.at("label").is_string()) {
            throw ConfigError("config: key 'label' must be a string");
        }
        label = doc.at("label").get<std::string>();
    } else {
        std::ostringstream os;
        os << "efficacy-" << theta1 << "-vs-" << theta2;
        label = os.str();
    }

    try {
        p.validate();
        sweep.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }

    const double n0 = x0.total();
    if (!(n0 > 0.0)) throw ConfigError("config: initial population must be positive");
    for (const double v : {x0.s, x0.v1, x0.v2, x0.e, x0.i, x0.r}) {
        if (v < 0.0) throw ConfigError("config: initial compartments must be nonnegative");
    }

    TimeGrid grid = [&] {
        try {
            return TimeGrid(0.0, p.horizon_days, dt);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("config: ") + err.what());
        }
    }();

    return AppConfig{Scenario{p, x0, grid, sweep, label}, analysis};
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError("config: parse error in '" + path.string() + "': " + err.what());
    }
    return config_from_json(doc);
}

nlohmann::json resolved_config_json(const AppConfig& cfg) {
    const ModelParams& p = cfg.scenario.params;
    const StatePoint& x0 = cfg.scenario.x0;
    const SweepConfig& sweep = cfg.scenario.sweep_cfg;
    const AnalysisSettings& a = cfg.analysis;
    return json{
        {"label", cfg.scenario.label},
        {"params",
         {{"beta", p.beta},
          {"sigma", p.sigma},
          {"gamma", p.gamma},
          {"delta", p.delta},
          {"alpha1", p.alpha1},
          {"alpha2", p.alpha2},
          {"eps1", p.eps1},
          {"eps2", p.eps2},
          {"theta1", p.theta1},
          {"theta2", p.theta2},
          {"b1", p.b1},
          {"b2", p.b2}}},
        {"initial",
         {{"s", x0.s}, {"v1", x0.v1}, {"v2", x0.v2}, {"e", x0.e}, {"i", x0.i}, {"r", x0.r}}},
        {"grid", {{"horizon_days", p.horizon_days}, {"dt", cfg.scenario.grid.dt()}}},
        {"sweep",
         {{"max_iterations", sweep.max_iterations},
          {"convergence_tol", sweep.convergence_tol},
          {"relaxation", sweep.relaxation},
          {"enable_u1", sweep.enable_u1},
          {"enable_u2", sweep.enable_u2}}},
        {"analysis",
         {{"activity_threshold", a.activity_threshold},
          {"theta1_sweep", a.theta1_sweep},
          {"theta2_sweep", a.theta2_sweep},
          {"rate_probe_fraction", a.rate_probe_fraction}}},
    };
}

}  // namespace vaxopt
