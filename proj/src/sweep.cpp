#include "vaxopt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vaxopt {

namespace {

constexpr double kZeroScheduleFloor = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

ControlPoint clamped_candidate(const StatePoint& x, const AdjointPoint& lam,
                               const ModelParams& p) {
    return {clamp01(x.s * (lam.l_s - lam.l_v1) / (2.0 * p.b1)),
            clamp01(x.s * (lam.l_s - lam.l_v2) / (2.0 * p.b2))};
}

void apply_forcing(ControlSchedule& u, const SweepConfig& cfg) {
    if (cfg.enable_u1 && cfg.enable_u2) return;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!cfg.enable_u1) u[k].u1 = 0.0;
        if (!cfg.enable_u2) u[k].u2 = 0.0;
    }
}

// Relative L1 test per control, with an absolute fallback for schedules that
// are essentially zero (e.g. forced-off controls).
bool control_converged(double abs_change, double abs_new, double tol) {
    if (abs_new < kZeroScheduleFloor) return abs_change <= tol;
    return abs_change <= tol * abs_new;
}

}  // namespace

void SweepConfig::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("SweepConfig: max_iterations must be >= 1");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("SweepConfig: convergence_tol must be > 0");
    if (!(relaxation > 0.0 && relaxation <= 1.0))
        throw std::invalid_argument("SweepConfig: relaxation must lie in (0, 1]");
}

ControlSchedule optimality_update(const StateTrajectory& states,
                                  const AdjointTrajectory& adjoints,
                                  const ModelParams& p) {
    if (!(states.grid() == adjoints.grid())) {
        throw std::invalid_argument("optimality_update: trajectories must share one grid");
    }
    ControlSchedule u(states.grid());
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = clamped_candidate(states[k], adjoints[k], p);
    }
    return u;
}

double evaluate_objective(const StateTrajectory& states, const ControlSchedule& controls,
                          const ModelParams& p) {
    if (!(states.grid() == controls.grid())) {
        throw std::invalid_argument("evaluate_objective: trajectories must share one grid");
    }
    std::vector<double> integrand(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        integrand[k] = objective_integrand(states[k], controls[k], p);
    }
    return trapezoid(integrand, states.grid().dt());
}

SweepResult run_sweep(const StatePoint& x0, const ModelParams& p, const TimeGrid& grid,
                      const SweepConfig& cfg) {
    p.validate();
    cfg.validate();

    ControlSchedule u = cfg.initial_guess ? *cfg.initial_guess : ControlSchedule(grid);
    if (!(u.grid() == grid)) {
        throw std::invalid_argument("run_sweep: initial guess must live on the sweep grid");
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = {clamp01(u[k].u1), clamp01(u[k].u2)};
    }
    apply_forcing(u, cfg);

    StateTrajectory states(grid);
    AdjointTrajectory adjoints(grid);

    int iterations = 0;
    bool converged = false;
    while (iterations < cfg.max_iterations) {
        ++iterations;
        states = integrate_forward(x0, u, p, grid);
        adjoints = integrate_backward(AdjointPoint{}, states, u, p, grid);

        ControlSchedule candidate = optimality_update(states, adjoints, p);
        apply_forcing(candidate, cfg);

        double change1 = 0.0, change2 = 0.0, norm1 = 0.0, norm2 = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            const ControlPoint mixed = cfg.relaxation * candidate[k] +
                                       (1.0 - cfg.relaxation) * u[k];
            change1 += std::abs(mixed.u1 - u[k].u1);
            change2 += std::abs(mixed.u2 - u[k].u2);
            norm1 += std::abs(mixed.u1);
            norm2 += std::abs(mixed.u2);
            u[k] = mixed;
        }
        if (control_converged(change1, norm1, cfg.convergence_tol) &&
            control_converged(change2, norm2, cfg.convergence_tol)) {
            converged = true;
            break;
        }
    }

    // Package a self-consistent result: one clean clamped update from the last
    // state/adjoint pair (bound nodes land exactly on 0 or 1, unlike the
    // relaxed mix), then recompute the trajectories it induces.
    u = optimality_update(states, adjoints, p);
    apply_forcing(u, cfg);
    states = integrate_forward(x0, u, p, grid);
    adjoints = integrate_backward(AdjointPoint{}, states, u, p, grid);
    const double objective = evaluate_objective(states, u, p);

    return SweepResult{std::move(states), std::move(adjoints), std::move(u),
                       objective, iterations, converged};
}

}  // namespace vaxopt
