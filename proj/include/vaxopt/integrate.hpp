#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vaxopt/model.hpp"

namespace vaxopt {

/// Uniform time grid over [t0, t_end] with step dt. The forward state pass,
/// the backward adjoint pass and the control schedule all share one grid.
class TimeGrid {
  public:
    /// Throws std::invalid_argument unless dt > 0, t_end > t0 and
    /// (t_end - t0) is an integer multiple of dt (to 1e-9 relative).
    TimeGrid(double t0, double t_end, double dt);

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    std::size_t step_count() const { return n_steps_; }
    std::size_t node_count() const { return n_steps_ + 1; }
    double t_end() const { return time_at(n_steps_); }
    double time_at(std::size_t node) const { return t0_ + static_cast<double>(node) * dt_; }

    bool operator==(const TimeGrid&) const = default;

  private:
    double t0_;
    double dt_;
    std::size_t n_steps_;
};

/// Node-indexed values on a TimeGrid, one entry per node. Node lookup is
/// exact; between nodes the trajectory is read piecewise-linearly.
template <typename Point>
class Trajectory {
  public:
    explicit Trajectory(const TimeGrid& grid) : grid_(grid), values_(grid.node_count()) {}
    Trajectory(const TimeGrid& grid, const Point& fill)
        : grid_(grid), values_(grid.node_count(), fill) {}

    const TimeGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    const Point& operator[](std::size_t node) const { return values_[node]; }
    Point& operator[](std::size_t node) { return values_[node]; }

    /// Linear interpolant halfway between nodes k and k+1.
    Point midpoint(std::size_t k) const { return 0.5 * (values_[k] + values_[k + 1]); }

    /// Piecewise-linear read at time t, clamped to the grid range. Times
    /// within 1e-9 steps of a node return the stored node value exactly.
    Point interpolate(double t) const {
        const double pos = (t - grid_.t0()) / grid_.dt();
        const double nearest = std::round(pos);
        if (nearest >= 0.0 && nearest <= static_cast<double>(grid_.step_count()) &&
            std::abs(pos - nearest) < 1e-9) {
            return values_[static_cast<std::size_t>(nearest)];
        }
        if (pos <= 0.0) return values_.front();
        if (pos >= static_cast<double>(grid_.step_count())) return values_.back();
        const auto k = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(k);
        return (1.0 - w) * values_[k] + w * values_[k + 1];
    }

  private:
    TimeGrid grid_;
    std::vector<Point> values_;
};

using StateTrajectory = Trajectory<StatePoint>;
using AdjointTrajectory = Trajectory<AdjointPoint>;
using ControlSchedule = Trajectory<ControlPoint>;

/// One classical 4th-order Runge-Kutta step from t to t + dt (dt may be
/// negative). `rhs(t, y, aux)` is called with the begin/midpoint/end
/// auxiliary inputs at the standard stage abscissae.
template <typename Y, typename Aux, typename Rhs>
Y rk4_step(const Y& y, double t, double dt, const Aux& aux_begin, const Aux& aux_mid,
           const Aux& aux_end, Rhs&& rhs) {
    const Y k1 = rhs(t, y, aux_begin);
    const Y k2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k1, aux_mid);
    const Y k3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k2, aux_mid);
    const Y k4 = rhs(t + dt, y + dt * k3, aux_end);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates the state system forward from x0 with the given control
/// schedule. Controls are piecewise-linear: half-step stages use the node
/// midpoint. Throws NumericalError if any component drops below
/// -1e-6 * N (reporting the offending time); ControlSchedule must live on
/// `grid` (std::invalid_argument otherwise).
StateTrajectory integrate_forward(const StatePoint& x0, const ControlSchedule& controls,
                                  const ModelParams& p, const TimeGrid& grid);

/// Integrates the adjoint system backward from lam_end at t_end (the
/// transversality condition is lam_end = 0). Stage values of the stored
/// state/control between nodes are linear midpoint interpolants.
AdjointTrajectory integrate_backward(const AdjointPoint& lam_end,
                                     const StateTrajectory& states,
                                     const ControlSchedule& controls,
                                     const ModelParams& p, const TimeGrid& grid);

/// Composite trapezoidal rule over a uniform grid with spacing dt.
/// Throws std::invalid_argument for fewer than two samples.
double trapezoid(std::span<const double> values, double dt);

}  // namespace vaxopt
