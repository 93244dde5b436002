#pragma once

#include <optional>

#include "vaxopt/integrate.hpp"
#include "vaxopt/model.hpp"

namespace vaxopt {

/// Settings for the forward-backward sweep iteration.
struct SweepConfig {
    int max_iterations = 500;
    /// Relative L1 tolerance on the per-iteration control change.
    double convergence_tol = 1e-3;
    /// Mixing weight in (0, 1]: u_new = relaxation * candidate + (1 - relaxation) * u_old.
    /// Pure replacement (1.0) tends to oscillate on stiff cost landscapes.
    double relaxation = 0.5;
    /// Starting schedule; the zero schedule when absent.
    std::optional<ControlSchedule> initial_guess;
    /// Single-vaccine studies force the excluded control to zero in every
    /// iteration while the other is still optimized.
    bool enable_u1 = true;
    bool enable_u2 = true;

    void validate() const;  // throws std::invalid_argument
};

/// Converged (or max-iteration) output of run_sweep. Controls satisfy the
/// box bounds at every node, adjoints satisfy transversality, and
/// objective == evaluate_objective(states, controls).
struct SweepResult {
    StateTrajectory states;
    AdjointTrajectory adjoints;
    ControlSchedule controls;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Clamped optimality condition, per node and vaccine:
/// u_i = min{1, max{0, S * (l_s - l_vi) / (2 * b_i)}}.
ControlSchedule optimality_update(const StateTrajectory& states,
                                  const AdjointTrajectory& adjoints,
                                  const ModelParams& p);

/// Objective functional J: trapezoid of the running cost over the grid.
double evaluate_objective(const StateTrajectory& states, const ControlSchedule& controls,
                          const ModelParams& p);

/// Forward-backward sweep: iterates forward state integration, backward
/// adjoint integration, the clamped optimality update and relaxed mixing
/// until both controls pass the relative-L1 convergence test (absolute
/// fallback when a control is identically zero). Non-convergence within
/// max_iterations is reported via converged = false, not an exception.
SweepResult run_sweep(const StatePoint& x0, const ModelParams& p, const TimeGrid& grid,
                      const SweepConfig& cfg);

}  // namespace vaxopt
