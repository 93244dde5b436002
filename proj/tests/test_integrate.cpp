#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "vaxopt/integrate.hpp"

using namespace vaxopt;

namespace {

ModelParams campaign_params(double th1, double th2) {
    return ModelParams::with_default_costs(th1, th2);
}

ControlSchedule constant_controls(const TimeGrid& grid, double u1, double u2) {
    return ControlSchedule(grid, ControlPoint{u1, u2});
}

bool same_bits(const StatePoint& a, const StatePoint& b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("TimeGrid construction and validation") {
    const TimeGrid grid(0.0, 60.0, 0.1);
    CHECK(grid.step_count() == 600);
    CHECK(grid.node_count() == 601);
    CHECK(grid.t0() == 0.0);
    CHECK(grid.time_at(0) == 0.0);
    CHECK(grid.t_end() == doctest::Approx(60.0).epsilon(1e-12));

    CHECK_THROWS_AS(TimeGrid(0.0, 60.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(0.0, 60.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(60.0, 60.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(0.0, 60.0, 0.7), std::invalid_argument);
}

TEST_CASE("trajectory lookup and interpolation") {
    const TimeGrid grid(0.0, 2.0, 0.5);
    ControlSchedule u(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = {static_cast<double>(k), 2.0 * static_cast<double>(k)};
    }
    CHECK(u[3].u1 == 3.0);                       // node lookup is exact
    CHECK(u.interpolate(1.0).u1 == 2.0);         // node time returns stored value
    CHECK(u.interpolate(1.25).u1 == doctest::Approx(2.5));
    CHECK(u.interpolate(-5.0).u1 == 0.0);        // clamped below
    CHECK(u.interpolate(99.0).u1 == 4.0);        // clamped above
    CHECK(u.midpoint(0).u2 == doctest::Approx(1.0));
}

TEST_CASE("trapezoid rule") {
    CHECK(trapezoid(std::vector<double>{0, 0, 0}, 1.0) == 0.0);
    CHECK(trapezoid(std::vector<double>{1, 1, 1, 1}, 1.0) == 3.0);
    CHECK(trapezoid(std::vector<double>{0, 1, 2}, 0.5) == 1.0);
    CHECK_THROWS_AS(trapezoid(std::vector<double>{1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(trapezoid(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST_CASE("rk4 kernel shows fourth-order convergence on y' = y") {
    const auto rhs = [](double, double y, int) { return y; };
    const auto integrate_to_one = [&](double dt) {
        double y = 1.0;
        const auto steps = static_cast<int>(std::lround(1.0 / dt));
        for (int k = 0; k < steps; ++k) {
            y = rk4_step(y, k * dt, dt, 0, 0, 0, rhs);
        }
        return y;
    };
    const double exact = std::exp(1.0);
    const double e1 = std::abs(integrate_to_one(0.2) - exact);
    const double e2 = std::abs(integrate_to_one(0.1) - exact);
    const double e3 = std::abs(integrate_to_one(0.05) - exact);
    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    CHECK(order12 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(order23 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(order12 > 3.8);
    CHECK(order12 < 4.2);
    CHECK(order23 > 3.8);
    CHECK(order23 < 4.2);
}

TEST_CASE("equilibrium is preserved exactly") {
    const ModelParams p = campaign_params(0.91, 0.51);
    const TimeGrid grid(0.0, 60.0, 0.1);
    const StatePoint x0{2e8, 0, 0, 0, 0, 0};
    const StateTrajectory traj = integrate_forward(x0, constant_controls(grid, 0, 0), p, grid);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(same_bits(traj[k], x0));
    }
}

TEST_CASE("population is conserved over the longest horizon") {
    const ModelParams p = campaign_params(0.91, 0.51);
    const TimeGrid grid(0.0, 180.0, 0.1);
    const StatePoint x0 = default_initial_state();
    const double n0 = x0.total();

    for (const auto& controls : {constant_controls(grid, 0, 0),
                                 constant_controls(grid, 0.5, 0.3)}) {
        const StateTrajectory traj = integrate_forward(x0, controls, p, grid);
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            worst = std::max(worst, std::abs(traj[k].total() - n0) / n0);
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("forward step-halving self-convergence") {
    const ModelParams p = campaign_params(0.91, 0.51);
    const StatePoint x0 = default_initial_state();

    const auto infected_at_end = [&](double dt) {
        const TimeGrid grid(0.0, 60.0, dt);
        const StateTrajectory traj =
            integrate_forward(x0, constant_controls(grid, 0, 0), p, grid);
        return traj[traj.size() - 1].i;
    };
    const double coarse = infected_at_end(0.1);
    const double fine = infected_at_end(0.05);
    CHECK(std::abs(coarse - fine) / std::abs(fine) < 1e-6);
}

TEST_CASE("backward integration of the decoupled source problem") {
    // With sigma = gamma = 0, I == 0 and u == 0 every coupling term vanishes
    // identically, leaving d(lambda_I)/dt = -1: lambda_I = T - t exactly and
    // zero elsewhere.
    ModelParams p = campaign_params(0.91, 0.51);
    p.sigma = 0.0;
    p.gamma = 0.0;
    const TimeGrid grid(0.0, 60.0, 0.1);
    const StatePoint frozen{1e8, 1e7, 2e7, 3e7, 0.0, 4e7};
    const StateTrajectory states(grid, frozen);
    const ControlSchedule controls(grid);

    const AdjointTrajectory lam = integrate_backward(AdjointPoint{}, states, controls, p, grid);
    for (std::size_t k = 0; k < lam.size(); ++k) {
        const double expected = grid.t_end() - grid.time_at(k);
        CHECK(lam[k].l_i == doctest::Approx(expected).epsilon(1e-12));
        CHECK(lam[k].l_s == 0.0);
        CHECK(lam[k].l_v1 == 0.0);
        CHECK(lam[k].l_v2 == 0.0);
        CHECK(lam[k].l_e == 0.0);
        CHECK(lam[k].l_r == 0.0);
    }
}

TEST_CASE("terminal condition is imposed exactly") {
    const ModelParams p = campaign_params(0.74, 0.67);
    const TimeGrid grid(0.0, 30.0, 0.1);
    const StateTrajectory states =
        integrate_forward(default_initial_state(), constant_controls(grid, 0.2, 0.1), p, grid);
    const AdjointTrajectory lam = integrate_backward(
        AdjointPoint{}, states, constant_controls(grid, 0.2, 0.1), p, grid);
    const AdjointPoint& at_end = lam[lam.size() - 1];
    CHECK(at_end.l_s == 0.0);
    CHECK(at_end.l_v1 == 0.0);
    CHECK(at_end.l_v2 == 0.0);
    CHECK(at_end.l_e == 0.0);
    CHECK(at_end.l_i == 0.0);
    CHECK(at_end.l_r == 0.0);
}

TEST_CASE("backward step-halving self-convergence") {
    // The linear mid-stage interpolation of the stored states caps the
    // backward pass at second order, so step halving shrinks the error by
    // four; lambda_S(0) agrees to a few 1e-6 relative at dt = 0.1 -> 0.05.
    const ModelParams p = campaign_params(0.91, 0.51);
    const StatePoint x0 = default_initial_state();

    const auto lambda_s_at_start = [&](double dt) {
        const TimeGrid grid(0.0, 60.0, dt);
        const ControlSchedule controls(grid);
        const StateTrajectory states = integrate_forward(x0, controls, p, grid);
        const AdjointTrajectory lam =
            integrate_backward(AdjointPoint{}, states, controls, p, grid);
        return lam[0].l_s;
    };
    const double coarse = lambda_s_at_start(0.1);
    const double fine = lambda_s_at_start(0.05);
    const double finest = lambda_s_at_start(0.025);
    CHECK(std::abs(coarse - fine) / std::abs(fine) < 5e-6);
    const double order = std::log2(std::abs(coarse - fine) / std::abs(fine - finest));
    CHECK(order > 1.8);
    CHECK(order < 4.5);
}

TEST_CASE("grid mismatch is a usage error") {
    const ModelParams p = campaign_params(0.91, 0.51);
    const TimeGrid grid(0.0, 10.0, 0.1);
    const TimeGrid other(0.0, 10.0, 0.2);
    const StatePoint x0 = default_initial_state();

    CHECK_THROWS_AS(integrate_forward(x0, ControlSchedule(other), p, grid),
                    std::invalid_argument);

    const StateTrajectory states = integrate_forward(x0, ControlSchedule(grid), p, grid);
    CHECK_THROWS_AS(
        integrate_backward(AdjointPoint{}, states, ControlSchedule(other), p, grid),
        std::invalid_argument);
    const StateTrajectory wrong_states =
        integrate_forward(x0, ControlSchedule(other), p, other);
    CHECK_THROWS_AS(
        integrate_backward(AdjointPoint{}, wrong_states, ControlSchedule(grid), p, grid),
        std::invalid_argument);
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    const ModelParams p = campaign_params(0.91, 0.74);
    const TimeGrid grid(0.0, 45.0, 0.1);
    const StatePoint x0 = default_initial_state();
    const ControlSchedule controls = constant_controls(grid, 0.7, 0.2);

    const StateTrajectory a = integrate_forward(x0, controls, p, grid);
    const StateTrajectory b = integrate_forward(x0, controls, p, grid);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(same_bits(a[k], b[k]));
    }
}

TEST_CASE("negativity beyond tolerance aborts with the offending time") {
    const ModelParams p = campaign_params(0.91, 0.51);
    const TimeGrid grid(0.0, 10.0, 0.1);
    StatePoint x0 = default_initial_state();
    x0.e = -1e-3 * x0.total();
    CHECK_THROWS_WITH_AS(integrate_forward(x0, ControlSchedule(grid), p, grid),
                         doctest::Contains("t = 0"), NumericalError);
}
