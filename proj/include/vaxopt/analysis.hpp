#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaxopt/sweep.hpp"

namespace vaxopt {

/// One fully specified campaign study: parameters, initial state, grid and
/// sweep settings.
struct Scenario {
    ModelParams params;
    StatePoint x0;
    TimeGrid grid;
    SweepConfig sweep_cfg;
    std::string label;
};

/// Recommended purchase shares, in percent of doses administered.
struct ProcurementSplit {
    double share_v1 = 0.0;
    double share_v2 = 0.0;
};

/// Shares 100 * A_i / (A_1 + A_2) where A_i is the trapezoid integral of the
/// vaccinated compartment V_i over the campaign. Throws std::domain_error
/// when no vaccination occurred (A_1 + A_2 == 0).
ProcurementSplit procurement_split(const SweepResult& result);

/// Qualitative shape of a converged two-control schedule.
enum class ControlShape {
    kV1Only,                  ///< u2 never active
    kSimultaneousThroughout,  ///< both active at >= 95% of nodes
    kV1ThenSimultaneous,      ///< u2 inactive on an initial prefix, then active
    kOther,
};

const char* to_string(ControlShape shape);

struct ControlClassification {
    ControlShape shape = ControlShape::kOther;
    /// First day u2 becomes active; present only for kV1ThenSimultaneous.
    std::optional<double> crossover_day;
};

/// Classifies a schedule by activity. A control is active at a node when it
/// exceeds activity_threshold times its own peak; a control whose peak is
/// below 1e-6 of the larger peak is treated as never active, so the result
/// depends only on relative activity and is invariant under rescaling both
/// controls together.
ControlClassification classify_control(const ControlSchedule& controls,
                                       double activity_threshold = 0.05);

/// One entry of a sensitivity study: the perturbed parameters, the sweep they
/// produced and its classification. Non-convergence is recorded in the
/// result, never thrown, so a grid always completes.
struct SensitivityCell {
    std::string label;
    ModelParams params;
    SweepResult result;
    ControlClassification classification;
    std::optional<ProcurementSplit> split;  ///< absent when no vaccination occurred
};

/// Runs one cell of a rate-sensitivity study with the given immunity and
/// return rates substituted into the base scenario.
SensitivityCell rate_sensitivity_cell(const Scenario& base, double alpha1, double alpha2,
                                      double eps1, double eps2, std::string label,
                                      double activity_threshold = 0.05);

/// The four sign-pattern columns x {+-10%, +-20%} rate grid plus the
/// unperturbed baseline (17 cells). In an "up" row the column's larger
/// parameter pair is raised above baseline; in a "down" row the smaller pair
/// is lowered. Cells may run concurrently up to `parallelism` threads;
/// ordering of the returned cells is deterministic.
std::vector<SensitivityCell> rate_sensitivity_grid(const Scenario& base,
                                                   double activity_threshold = 0.05,
                                                   unsigned parallelism = 1);

/// Which efficacy stays at its base value while the other is swept.
enum class FixedEfficacy { kTheta1, kTheta2 };

struct EfficacySweepOutcome {
    std::vector<SensitivityCell> cells;
    /// Swept values violating theta2 < theta1, skipped with a warning.
    std::vector<double> skipped_values;
    /// First swept value whose classification differs from the first valid
    /// cell's classification (values are expected ordered base-first).
    std::optional<double> change_value;
};

/// Sweeps the non-fixed efficacy over `values`, classifying each cell and
/// reporting where the control shape changes.
EfficacySweepOutcome efficacy_sensitivity_sweep(const Scenario& base, FixedEfficacy fixed,
                                                std::span<const double> values,
                                                double activity_threshold = 0.05,
                                                unsigned parallelism = 1);

/// Three-policy comparison: only vaccine 1 available, both available, only
/// vaccine 2 available. Each policy is optimized (the excluded control is
/// forced to zero inside the sweep). Cumulative numbers are trapezoid
/// integrals of I(t) over the campaign.
struct InfectedComparison {
    SweepResult only_v1;
    SweepResult both;
    SweepResult only_v2;
    double cumulative_only_v1 = 0.0;
    double cumulative_both = 0.0;
    double cumulative_only_v2 = 0.0;
};

InfectedComparison infected_comparison(const Scenario& base);

/// I(t) sampled at the grid nodes.
std::vector<double> infected_series(const StateTrajectory& states);

}  // namespace vaxopt
