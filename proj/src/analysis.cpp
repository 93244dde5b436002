#include "vaxopt/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace vaxopt {

namespace {

// Relative peak below which a control is considered numerically silent.
constexpr double kPeakNoiseFloor = 1e-6;

std::vector<bool> active_nodes(const ControlSchedule& controls, double peak, double own_peak,
                               double threshold, bool first_control) {
    std::vector<bool> act(controls.size(), false);
    if (own_peak <= kPeakNoiseFloor * peak || own_peak <= 0.0) return act;
    for (std::size_t k = 0; k < controls.size(); ++k) {
        const double v = first_control ? controls[k].u1 : controls[k].u2;
        act[k] = v > threshold * own_peak;
    }
    return act;
}

double active_fraction(const std::vector<bool>& act) {
    if (act.empty()) return 0.0;
    const auto n = static_cast<double>(std::count(act.begin(), act.end(), true));
    return n / static_cast<double>(act.size());
}

// Runs grid cells on up to `parallelism` threads; results land in
// caller-provided slots so ordering stays deterministic. The first cell
// exception (if any) is rethrown after all threads join.
void run_cells(std::size_t count, unsigned parallelism,
               const std::function<void(std::size_t)>& work) {
    if (parallelism <= 1 || count <= 1) {
        for (std::size_t k = 0; k < count; ++k) work(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    const unsigned n_threads = std::min<unsigned>(parallelism, static_cast<unsigned>(count));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
                try {
                    work(k);
                } catch (...) {
                    const std::scoped_lock lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

SensitivityCell make_cell(const Scenario& scenario, std::string label,
                          double activity_threshold) {
    SweepResult result = run_sweep(scenario.x0, scenario.params, scenario.grid,
                                   scenario.sweep_cfg);
    ControlClassification cls = classify_control(result.controls, activity_threshold);
    std::optional<ProcurementSplit> split;
    try {
        split = procurement_split(result);
    } catch (const std::domain_error&) {
        // no vaccination occurred; leave the split absent
    }
    return SensitivityCell{std::move(label), scenario.params, std::move(result),
                           cls, split};
}

}  // namespace

const char* to_string(ControlShape shape) {
    switch (shape) {
        case ControlShape::kV1Only: return "V1-only";
        case ControlShape::kSimultaneousThroughout: return "simultaneous-throughout";
        case ControlShape::kV1ThenSimultaneous: return "V1-then-simultaneous";
        case ControlShape::kOther: return "other";
    }
    return "other";
}

ProcurementSplit procurement_split(const SweepResult& result) {
    const std::size_t n = result.states.size();
    std::vector<double> v1(n), v2(n);
    for (std::size_t k = 0; k < n; ++k) {
        v1[k] = result.states[k].v1;
        v2[k] = result.states[k].v2;
    }
    const double dt = result.states.grid().dt();
    const double a1 = trapezoid(v1, dt);
    const double a2 = trapezoid(v2, dt);
    if (a1 + a2 <= 0.0) {
        throw std::domain_error("procurement_split: no vaccination occurred");
    }
    return {100.0 * a1 / (a1 + a2), 100.0 * a2 / (a1 + a2)};
}

ControlClassification classify_control(const ControlSchedule& controls,
                                       double activity_threshold) {
    double peak1 = 0.0, peak2 = 0.0;
    for (std::size_t k = 0; k < controls.size(); ++k) {
        peak1 = std::max(peak1, controls[k].u1);
        peak2 = std::max(peak2, controls[k].u2);
    }
    const double peak = std::max(peak1, peak2);
    const auto act1 = active_nodes(controls, peak, peak1, activity_threshold, true);
    const auto act2 = active_nodes(controls, peak, peak2, activity_threshold, false);

    const bool any1 = std::any_of(act1.begin(), act1.end(), [](bool b) { return b; });
    const bool any2 = std::any_of(act2.begin(), act2.end(), [](bool b) { return b; });

    if (any1 && !any2) return {ControlShape::kV1Only, std::nullopt};
    if (active_fraction(act1) >= 0.95 && active_fraction(act2) >= 0.95) {
        return {ControlShape::kSimultaneousThroughout, std::nullopt};
    }
    if (any2) {
        const auto first2 = static_cast<std::size_t>(
            std::find(act2.begin(), act2.end(), true) - act2.begin());
        if (first2 > 0 && !act1.empty() && act1.front()) {
            return {ControlShape::kV1ThenSimultaneous,
                    controls.grid().time_at(first2)};
        }
    }
    return {ControlShape::kOther, std::nullopt};
}

SensitivityCell rate_sensitivity_cell(const Scenario& base, double alpha1, double alpha2,
                                      double eps1, double eps2, std::string label,
                                      double activity_threshold) {
    Scenario cell = base;
    cell.params.alpha1 = alpha1;
    cell.params.alpha2 = alpha2;
    cell.params.eps1 = eps1;
    cell.params.eps2 = eps2;
    return make_cell(cell, std::move(label), activity_threshold);
}

std::vector<SensitivityCell> rate_sensitivity_grid(const Scenario& base,
                                                   double activity_threshold,
                                                   unsigned parallelism) {
    struct CellSpec {
        std::string label;
        double a1, a2, e1, e2;
    };
    const double a0 = base.params.alpha1;
    const double e0 = base.params.eps1;

    std::vector<CellSpec> specs;
    specs.push_back({"baseline", a0, a0, e0, e0});
    for (const double m : {0.10, 0.20}) {
        const auto pct = std::to_string(static_cast<int>(std::lround(m * 100)));
        // Four sign patterns; the raised/lowered member of each pair follows
        // the pattern while the other stays at baseline.
        specs.push_back({"a1>a2 e1>e2 +" + pct + "%", a0 * (1 + m), a0, e0 * (1 + m), e0});
        specs.push_back({"a1<a2 e1<e2 +" + pct + "%", a0, a0 * (1 + m), e0, e0 * (1 + m)});
        specs.push_back({"a1>a2 e1<e2 +" + pct + "%", a0 * (1 + m), a0, e0, e0 * (1 + m)});
        specs.push_back({"a1<a2 e1>e2 +" + pct + "%", a0, a0 * (1 + m), e0 * (1 + m), e0});
        specs.push_back({"a1>a2 e1>e2 -" + pct + "%", a0, a0 * (1 - m), e0, e0 * (1 - m)});
        specs.push_back({"a1<a2 e1<e2 -" + pct + "%", a0 * (1 - m), a0, e0 * (1 - m), e0});
        specs.push_back({"a1>a2 e1<e2 -" + pct + "%", a0, a0 * (1 - m), e0 * (1 - m), e0});
        specs.push_back({"a1<a2 e1>e2 -" + pct + "%", a0 * (1 - m), a0, e0, e0 * (1 - m)});
    }

    std::vector<std::optional<SensitivityCell>> slots(specs.size());
    run_cells(specs.size(), parallelism, [&](std::size_t k) {
        const CellSpec& s = specs[k];
        slots[k] = rate_sensitivity_cell(base, s.a1, s.a2, s.e1, s.e2, s.label,
                                         activity_threshold);
    });

    std::vector<SensitivityCell> cells;
    cells.reserve(slots.size());
    for (auto& slot : slots) cells.push_back(std::move(*slot));
    return cells;
}

EfficacySweepOutcome efficacy_sensitivity_sweep(const Scenario& base, FixedEfficacy fixed,
                                                std::span<const double> values,
                                                double activity_threshold,
                                                unsigned parallelism) {
    EfficacySweepOutcome out;

    std::vector<double> accepted;
    for (const double v : values) {
        if (!(v > 0.0 && v < 1.0)) {
            out.skipped_values.push_back(v);
            continue;
        }
        const double th1 = fixed == FixedEfficacy::kTheta1 ? base.params.theta1 : v;
        const double th2 = fixed == FixedEfficacy::kTheta2 ? base.params.theta2 : v;
        if (!(th2 < th1)) {
            out.skipped_values.push_back(v);
            continue;
        }
        accepted.push_back(v);
    }

    std::vector<std::optional<SensitivityCell>> slots(accepted.size());
    run_cells(accepted.size(), parallelism, [&](std::size_t k) {
        Scenario cell = base;
        const double v = accepted[k];
        std::string label;
        if (fixed == FixedEfficacy::kTheta2) {
            cell.params.theta1 = v;
            cell.params.b1 = v * 1e4;
            label = "theta1=" + std::to_string(v);
        } else {
            cell.params.theta2 = v;
            cell.params.b2 = v * 1e4;
            label = "theta2=" + std::to_string(v);
        }
        slots[k] = make_cell(cell, std::move(label), activity_threshold);
    });

    for (auto& slot : slots) out.cells.push_back(std::move(*slot));
    if (!out.cells.empty()) {
        const ControlShape reference = out.cells.front().classification.shape;
        for (std::size_t k = 1; k < out.cells.size(); ++k) {
            if (out.cells[k].classification.shape != reference) {
                out.change_value = accepted[k];
                break;
            }
        }
    }
    return out;
}

InfectedComparison infected_comparison(const Scenario& base) {
    Scenario only_v1 = base;
    only_v1.sweep_cfg.enable_u2 = false;
    Scenario only_v2 = base;
    only_v2.sweep_cfg.enable_u1 = false;

    SweepResult r1 = run_sweep(only_v1.x0, only_v1.params, only_v1.grid, only_v1.sweep_cfg);
    SweepResult rb = run_sweep(base.x0, base.params, base.grid, base.sweep_cfg);
    SweepResult r2 = run_sweep(only_v2.x0, only_v2.params, only_v2.grid, only_v2.sweep_cfg);

    const double dt = base.grid.dt();
    const double c1 = trapezoid(infected_series(r1.states), dt);
    const double cb = trapezoid(infected_series(rb.states), dt);
    const double c2 = trapezoid(infected_series(r2.states), dt);
    return InfectedComparison{std::move(r1), std::move(rb), std::move(r2), c1, cb, c2};
}

std::vector<double> infected_series(const StateTrajectory& states) {
    std::vector<double> out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].i;
    return out;
}

}  // namespace vaxopt
