// Command-line entry points: solve one campaign, run the sensitivity grids,
// compare single-vaccine policies, or integrate the uncontrolled baseline.
// All commands consume one JSON config and emit CSV/JSON files plus a run
// manifest into --out.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vaxopt/analysis.hpp"
#include "vaxopt/config.hpp"
#include "vaxopt/errors.hpp"
#include "vaxopt/output.hpp"
#include "vaxopt/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vaxopt;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    double dt = 0.0;          // > 0 overrides the config grid step
    double tol = 0.0;         // > 0 overrides sweep.convergence_tol
    double relaxation = 0.0;  // > 0 overrides sweep.relaxation
    int max_iters = 0;        // > 0 overrides sweep.max_iterations
    unsigned parallelism = 1;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Path to the JSON config")->required();
    cmd->add_option("--out", opts.out_dir, "Output directory (created if missing)")->required();
    cmd->add_option("--dt", opts.dt, "Override integration step (days)");
    cmd->add_option("--tol", opts.tol, "Override sweep convergence tolerance");
    cmd->add_option("--max-iters", opts.max_iters, "Override sweep iteration cap");
    cmd->add_option("--relaxation", opts.relaxation, "Override control mixing weight");
    cmd->add_option("--parallelism", opts.parallelism, "Concurrent grid cells");
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Loads the config and applies CLI overrides by editing the document before
// the final parse, so the manifest's resolved config reflects what ran.
AppConfig load_with_overrides(const CliOptions& opts, std::string& raw_bytes) {
    raw_bytes = slurp(opts.config_path);
    json doc;
    try {
        doc = json::parse(raw_bytes);
    } catch (const json::parse_error& err) {
        throw ConfigError("config: parse error in '" + opts.config_path + "': " + err.what());
    }
    if (doc.is_object()) {
        if (opts.dt > 0.0) doc["grid"]["dt"] = opts.dt;
        if (opts.tol > 0.0) doc["sweep"]["convergence_tol"] = opts.tol;
        if (opts.relaxation > 0.0) doc["sweep"]["relaxation"] = opts.relaxation;
        if (opts.max_iters > 0) doc["sweep"]["max_iterations"] = opts.max_iters;
    }
    return config_from_json(doc);
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const AppConfig& cfg, const std::string& raw_bytes,
                    std::vector<std::string> outputs) {
    RunManifest manifest;
    manifest.command = command;
    manifest.label = cfg.scenario.label;
    manifest.timestamp = utc_timestamp();
    manifest.config_digest = digest_bytes(raw_bytes);
    manifest.resolved_config = resolved_config_json(cfg);
    outputs.push_back("manifest.json");
    manifest.outputs = std::move(outputs);
    write_text_atomic(out_dir / "manifest.json", manifest_json(manifest).dump(2) + "\n");
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? format_g17(*v) : std::string{};
}

int cmd_solve(const CliOptions& opts) {
    std::string raw;
    const AppConfig cfg = load_with_overrides(opts, raw);
    const Scenario& sc = cfg.scenario;
    fs::create_directories(opts.out_dir);

    const SweepResult result = run_sweep(sc.x0, sc.params, sc.grid, sc.sweep_cfg);
    const ControlClassification cls =
        classify_control(result.controls, cfg.analysis.activity_threshold);
    std::optional<ProcurementSplit> split;
    try {
        split = procurement_split(result);
    } catch (const std::domain_error&) {
    }

    const fs::path out(opts.out_dir);
    write_states_csv(out / "states.csv", result.states);
    write_controls_csv(out / "controls.csv", result.controls);
    write_adjoints_csv(out / "adjoints.csv", result.adjoints);
    json summary = sweep_summary_json(result, cls, split, cfg.analysis.activity_threshold);
    summary["label"] = sc.label;
    write_text_atomic(out / "summary.json", summary.dump(2) + "\n");
    write_manifest(out, "solve", cfg, raw,
                   {"states.csv", "controls.csv", "adjoints.csv", "summary.json"});

    std::cout << sc.label << ": J = " << format_g17(result.objective) << ", "
              << result.iterations << " iterations, "
              << (result.converged ? "converged" : "NOT converged") << ", "
              << to_string(cls.shape) << "\n";
    return 0;
}

int cmd_baseline(const CliOptions& opts) {
    std::string raw;
    const AppConfig cfg = load_with_overrides(opts, raw);
    const Scenario& sc = cfg.scenario;
    fs::create_directories(opts.out_dir);

    const ControlSchedule zero(sc.grid);
    const StateTrajectory states = integrate_forward(sc.x0, zero, sc.params, sc.grid);
    const double objective = evaluate_objective(states, zero, sc.params);

    const fs::path out(opts.out_dir);
    write_states_csv(out / "states.csv", states);
    write_controls_csv(out / "controls.csv", zero);
    json summary{
        {"label", sc.label},
        {"objective", objective},
        {"cumulative_infected", trapezoid(infected_series(states), sc.grid.dt())},
        {"iterations", 0},
        {"converged", true},
        {"classification", nullptr},
        {"crossover_day", nullptr},
        {"procurement", nullptr},
    };
    write_text_atomic(out / "summary.json", summary.dump(2) + "\n");
    write_manifest(out, "baseline", cfg, raw, {"states.csv", "controls.csv", "summary.json"});

    std::cout << sc.label << " (uncontrolled): J = " << format_g17(objective) << "\n";
    return 0;
}

std::string cells_csv_header() {
    return "label,alpha1,alpha2,eps1,eps2,theta1,theta2,classification,crossover_day,"
           "share_v1,share_v2,objective,iterations,converged\n";
}

void append_cell_row(std::string& csv, const SensitivityCell& cell) {
    const ModelParams& p = cell.params;
    csv += cell.label + ',' + format_g17(p.alpha1) + ',' + format_g17(p.alpha2) + ',' +
           format_g17(p.eps1) + ',' + format_g17(p.eps2) + ',' + format_g17(p.theta1) +
           ',' + format_g17(p.theta2) + ',' + to_string(cell.classification.shape) + ',' +
           csv_cell(cell.classification.crossover_day) + ',';
    if (cell.split) {
        csv += format_g17(cell.split->share_v1) + ',' + format_g17(cell.split->share_v2);
    } else {
        csv += ",";
    }
    csv += ',' + format_g17(cell.result.objective) + ',' +
           std::to_string(cell.result.iterations) + ',' +
           (cell.result.converged ? "true" : "false") + '\n';
}

int cmd_sweep_rates(const CliOptions& opts) {
    std::string raw;
    const AppConfig cfg = load_with_overrides(opts, raw);
    const Scenario& sc = cfg.scenario;
    fs::create_directories(opts.out_dir);

    std::vector<SensitivityCell> cells =
        rate_sensitivity_grid(sc, cfg.analysis.activity_threshold, opts.parallelism);

    // Diagnostic row: the probe reduction next to the -20% threshold cell
    // (lowered alpha2 and eps1, the pattern that changes the control shape).
    const double probe = cfg.analysis.rate_probe_fraction;
    const auto pct = std::to_string(static_cast<int>(std::lround(probe * 100)));
    cells.push_back(rate_sensitivity_cell(
        sc, sc.params.alpha1, sc.params.alpha2 * (1 - probe), sc.params.eps1 * (1 - probe),
        sc.params.eps2, "probe a1>a2 e1<e2 -" + pct + "%", cfg.analysis.activity_threshold));

    std::string csv = cells_csv_header();
    int unconverged = 0;
    for (const auto& cell : cells) {
        append_cell_row(csv, cell);
        if (!cell.result.converged) ++unconverged;
    }
    const fs::path out(opts.out_dir);
    write_text_atomic(out / "cells.csv", csv);

    json summary{
        {"label", sc.label},
        {"cells", cells.size()},
        {"unconverged_cells", unconverged},
        {"baseline_classification", to_string(cells.front().classification.shape)},
        {"activity_threshold", cfg.analysis.activity_threshold},
    };
    write_text_atomic(out / "summary.json", summary.dump(2) + "\n");
    write_manifest(out, "sweep-rates", cfg, raw, {"cells.csv", "summary.json"});

    std::cout << "rate grid: " << cells.size() << " cells, " << unconverged
              << " unconverged\n";
    return 0;
}

int cmd_sweep_efficacy(const CliOptions& opts) {
    std::string raw;
    const AppConfig cfg = load_with_overrides(opts, raw);
    const Scenario& sc = cfg.scenario;
    fs::create_directories(opts.out_dir);

    const EfficacySweepOutcome sweep1 =
        efficacy_sensitivity_sweep(sc, FixedEfficacy::kTheta2, cfg.analysis.theta1_sweep,
                                   cfg.analysis.activity_threshold, opts.parallelism);
    const EfficacySweepOutcome sweep2 =
        efficacy_sensitivity_sweep(sc, FixedEfficacy::kTheta1, cfg.analysis.theta2_sweep,
                                   cfg.analysis.activity_threshold, opts.parallelism);

    for (const auto& [name, outcome] :
         {std::pair{"theta1", &sweep1}, std::pair{"theta2", &sweep2}}) {
        for (const double v : outcome->skipped_values) {
            std::cerr << "warning: skipped " << name << " = " << v
                      << " (violates theta2 < theta1)\n";
        }
    }

    std::string csv = cells_csv_header();
    for (const auto& cell : sweep1.cells) append_cell_row(csv, cell);
    for (const auto& cell : sweep2.cells) append_cell_row(csv, cell);
    const fs::path out(opts.out_dir);
    write_text_atomic(out / "cells.csv", csv);

    const auto as_json = [](const EfficacySweepOutcome& o) {
        return json{
            {"cells", o.cells.size()},
            {"skipped_values", o.skipped_values},
            {"change_value", o.change_value ? json(*o.change_value) : json(nullptr)},
        };
    };
    json summary{
        {"label", sc.label},
        {"theta1_sweep", as_json(sweep1)},
        {"theta2_sweep", as_json(sweep2)},
        {"activity_threshold", cfg.analysis.activity_threshold},
    };
    write_text_atomic(out / "summary.json", summary.dump(2) + "\n");
    write_manifest(out, "sweep-efficacy", cfg, raw, {"cells.csv", "summary.json"});

    std::cout << "efficacy sweep: " << sweep1.cells.size() + sweep2.cells.size()
              << " cells\n";
    return 0;
}

int cmd_compare_infected(const CliOptions& opts) {
    std::string raw;
    const AppConfig cfg = load_with_overrides(opts, raw);
    const Scenario& sc = cfg.scenario;
    fs::create_directories(opts.out_dir);

    const InfectedComparison cmp = infected_comparison(sc);

    std::string csv = "t,I_only_v1,I_both,I_only_v2\n";
    for (std::size_t k = 0; k < cmp.both.states.size(); ++k) {
        csv += format_g17(sc.grid.time_at(k)) + ',' + format_g17(cmp.only_v1.states[k].i) +
               ',' + format_g17(cmp.both.states[k].i) + ',' +
               format_g17(cmp.only_v2.states[k].i) + '\n';
    }
    const fs::path out(opts.out_dir);
    write_text_atomic(out / "infected.csv", csv);

    const auto run_json = [](const SweepResult& r, double cumulative) {
        return json{{"objective", r.objective},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"cumulative_infected", cumulative}};
    };
    json summary{
        {"label", sc.label},
        {"only_v1", run_json(cmp.only_v1, cmp.cumulative_only_v1)},
        {"both", run_json(cmp.both, cmp.cumulative_both)},
        {"only_v2", run_json(cmp.only_v2, cmp.cumulative_only_v2)},
    };
    write_text_atomic(out / "summary.json", summary.dump(2) + "\n");
    write_manifest(out, "compare-infected", cfg, raw, {"infected.csv", "summary.json"});

    std::cout << "cumulative infected: only-V1 = " << format_g17(cmp.cumulative_only_v1)
              << ", both = " << format_g17(cmp.cumulative_both)
              << ", only-V2 = " << format_g17(cmp.cumulative_only_v2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-vaccine campaign optimizer (forward-backward sweep)"};
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* solve = app.add_subcommand("solve", "Optimize one campaign scenario");
    CLI::App* baseline = app.add_subcommand("baseline", "Integrate the uncontrolled scenario");
    CLI::App* rates = app.add_subcommand("sweep-rates", "Immunity/return-rate sensitivity grid");
    CLI::App* efficacy = app.add_subcommand("sweep-efficacy", "Efficacy sensitivity sweeps");
    CLI::App* compare =
        app.add_subcommand("compare-infected", "Single-vaccine vs combined policies");
    for (CLI::App* cmd : {solve, baseline, rates, efficacy, compare}) {
        add_common_options(cmd, opts);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opts);
        if (baseline->parsed()) return cmd_baseline(opts);
        if (rates->parsed()) return cmd_sweep_rates(opts);
        if (efficacy->parsed()) return cmd_sweep_efficacy(opts);
        if (compare->parsed()) return cmd_compare_infected(opts);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
