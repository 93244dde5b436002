#include "vaxopt/integrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vaxopt {

namespace {

// State/control pair fed to the adjoint RHS at one RK4 stage.
struct AdjointStageInput {
    StatePoint x;
    ControlPoint u;
};

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": inputs must share one time grid");
    }
}

// Negativity beyond -1e-6 * N aborts; fixed-step integration is allowed the
// tiny excursions below that. Non-finite values abort immediately.
void check_nonnegative(const StatePoint& x, double t) {
    const double tol = -1e-6 * x.total();
    const double values[6] = {x.s, x.v1, x.v2, x.e, x.i, x.r};
    static const char* names[6] = {"S", "V1", "V2", "E", "I", "R"};
    for (int j = 0; j < 6; ++j) {
        if (!std::isfinite(values[j]) || values[j] < tol) {
            throw NumericalError("integrate_forward: compartment " + std::string(names[j]) +
                                 " = " + std::to_string(values[j]) +
                                 " fell below tolerance at t = " + std::to_string(t));
        }
    }
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t_end, double dt) : t0_(t0), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
    if (!(t_end > t0)) throw std::invalid_argument("TimeGrid: t_end must exceed t0");
    const double steps = (t_end - t0) / dt;
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
        throw std::invalid_argument(
            "TimeGrid: horizon is not an integer multiple of dt (steps = " +
            std::to_string(steps) + ")");
    }
    n_steps_ = static_cast<std::size_t>(rounded);
}

StateTrajectory integrate_forward(const StatePoint& x0, const ControlSchedule& controls,
                                  const ModelParams& p, const TimeGrid& grid) {
    require_same_grid(controls.grid(), grid, "integrate_forward");

    const auto rhs = [&p](double t, const StatePoint& x, const ControlPoint& u) {
        return state_rhs(t, x, u, p);
    };

    StateTrajectory out(grid);
    out[0] = x0;
    check_nonnegative(x0, grid.t0());
    const double dt = grid.dt();
    for (std::size_t k = 0; k < grid.step_count(); ++k) {
        out[k + 1] = rk4_step(out[k], grid.time_at(k), dt, controls[k],
                              controls.midpoint(k), controls[k + 1], rhs);
        check_nonnegative(out[k + 1], grid.time_at(k + 1));
    }
    return out;
}

AdjointTrajectory integrate_backward(const AdjointPoint& lam_end,
                                     const StateTrajectory& states,
                                     const ControlSchedule& controls,
                                     const ModelParams& p, const TimeGrid& grid) {
    require_same_grid(states.grid(), grid, "integrate_backward");
    require_same_grid(controls.grid(), grid, "integrate_backward");

    const auto rhs = [&p](double t, const AdjointPoint& lam, const AdjointStageInput& in) {
        return adjoint_rhs(t, lam, in.x, in.u, p);
    };

    AdjointTrajectory out(grid);
    out[grid.step_count()] = lam_end;
    const double dt = grid.dt();
    for (std::size_t k = grid.step_count(); k > 0; --k) {
        const AdjointStageInput at_end{states[k], controls[k]};
        const AdjointStageInput at_mid{states.midpoint(k - 1), controls.midpoint(k - 1)};
        const AdjointStageInput at_begin{states[k - 1], controls[k - 1]};
        out[k - 1] = rk4_step(out[k], grid.time_at(k), -dt, at_end, at_mid, at_begin, rhs);
    }
    return out;
}

double trapezoid(std::span<const double> values, double dt) {
    if (values.size() < 2) {
        throw std::invalid_argument("trapezoid: need at least two samples");
    }
    double interior = 0.0;
    for (std::size_t k = 1; k + 1 < values.size(); ++k) interior += values[k];
    return dt * (0.5 * (values.front() + values.back()) + interior);
}

}  // namespace vaxopt
