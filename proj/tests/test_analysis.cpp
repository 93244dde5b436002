#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "vaxopt/analysis.hpp"

using namespace vaxopt;

namespace {

Scenario base_scenario(double th1, double th2, double horizon = 30.0, double dt = 0.1) {
    ModelParams p = ModelParams::with_default_costs(th1, th2);
    p.horizon_days = horizon;
    return Scenario{p, default_initial_state(), TimeGrid(0.0, horizon, dt), SweepConfig{},
                    "test"};
}

ControlSchedule schedule_from(const TimeGrid& grid, double u1, double u2) {
    return ControlSchedule(grid, ControlPoint{u1, u2});
}

SweepResult fake_result(const TimeGrid& grid, double v1, double v2) {
    StateTrajectory states(grid, StatePoint{1e8, v1, v2, 0, 0, 0});
    return SweepResult{std::move(states), AdjointTrajectory(grid), ControlSchedule(grid),
                       0.0, 1, true};
}

}  // namespace

TEST_CASE("classification of simple shapes") {
    const TimeGrid grid(0.0, 60.0, 0.5);

    const auto v1_only = classify_control(schedule_from(grid, 0.5, 0.0));
    CHECK(v1_only.shape == ControlShape::kV1Only);
    CHECK_FALSE(v1_only.crossover_day.has_value());

    const auto simultaneous = classify_control(schedule_from(grid, 0.5, 0.5));
    CHECK(simultaneous.shape == ControlShape::kSimultaneousThroughout);
    CHECK_FALSE(simultaneous.crossover_day.has_value());
}

TEST_CASE("classification detects a delayed second control with its crossover day") {
    const TimeGrid grid(0.0, 60.0, 0.5);
    ControlSchedule u(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double t = grid.time_at(k);
        u[k].u1 = 1.0;
        u[k].u2 = t >= 40.0 ? 0.5 : 0.0;
    }
    const auto cls = classify_control(u);
    CHECK(cls.shape == ControlShape::kV1ThenSimultaneous);
    REQUIRE(cls.crossover_day.has_value());
    CHECK(*cls.crossover_day == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("classification depends only on relative activity") {
    const TimeGrid grid(0.0, 60.0, 0.5);
    ControlSchedule u(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double t = grid.time_at(k);
        u[k].u1 = 0.8 + 0.2 * std::sin(t);
        u[k].u2 = t >= 25.0 ? 0.3 : 0.0;
    }
    const auto reference = classify_control(u);
    ControlSchedule scaled(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        scaled[k] = 1e-3 * u[k];
    }
    const auto rescaled = classify_control(scaled);
    CHECK(rescaled.shape == reference.shape);
    CHECK(rescaled.crossover_day == reference.crossover_day);
}

TEST_CASE("a numerically silent control never counts as active") {
    const TimeGrid grid(0.0, 10.0, 0.5);
    ControlSchedule u(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k].u1 = 0.9;
        u[k].u2 = 1e-13;  // noise next to u1's peak
    }
    CHECK(classify_control(u).shape == ControlShape::kV1Only);
}

TEST_CASE("procurement split basics") {
    const TimeGrid grid(0.0, 10.0, 0.5);

    const auto all_v1 = procurement_split(fake_result(grid, 5e5, 0.0));
    CHECK(all_v1.share_v1 == 100.0);
    CHECK(all_v1.share_v2 == 0.0);

    const auto even = procurement_split(fake_result(grid, 3e5, 3e5));
    CHECK(even.share_v1 == doctest::Approx(50.0));
    CHECK(even.share_v2 == doctest::Approx(50.0));

    CHECK_THROWS_AS(procurement_split(fake_result(grid, 0.0, 0.0)), std::domain_error);
}

TEST_CASE("procurement shares always sum to one hundred") {
    const TimeGrid grid(0.0, 10.0, 0.5);
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> mass(0.0, 1e7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto split = procurement_split(fake_result(grid, mass(rng), mass(rng) + 1.0));
        CHECK(std::abs(split.share_v1 + split.share_v2 - 100.0) < 1e-9);
    }
}

TEST_CASE("rate sensitivity grid covers the four sign patterns at both magnitudes") {
    Scenario base = base_scenario(0.74, 0.67, 20.0, 0.2);
    const auto cells = rate_sensitivity_grid(base, 0.05, 4);
    REQUIRE(cells.size() == 17);
    CHECK(cells.front().label == "baseline");
    CHECK(cells.front().params.alpha1 == 0.08);
    CHECK(cells.front().params.eps2 == 0.54);

    // the -20% cell of the a1>a2, e1<e2 pattern lowers alpha2 and eps1
    const auto special = std::find_if(cells.begin(), cells.end(), [](const auto& c) {
        return c.label == "a1>a2 e1<e2 -20%";
    });
    REQUIRE(special != cells.end());
    CHECK(special->params.alpha1 == 0.08);
    CHECK(special->params.alpha2 == doctest::Approx(0.064).epsilon(1e-15));
    CHECK(special->params.eps1 == doctest::Approx(0.432).epsilon(1e-15));
    CHECK(special->params.eps2 == 0.54);

    const auto up10 = std::find_if(cells.begin(), cells.end(), [](const auto& c) {
        return c.label == "a1<a2 e1<e2 +10%";
    });
    REQUIRE(up10 != cells.end());
    CHECK(up10->params.alpha2 == doctest::Approx(0.088).epsilon(1e-15));
    CHECK(up10->params.eps2 == doctest::Approx(0.594).epsilon(1e-15));
    CHECK(up10->params.alpha1 == 0.08);

    // bounds, transversality and conservation hold in every cell
    for (const auto& cell : cells) {
        CHECK(cell.result.controls.size() == base.grid.node_count());
        if (cell.split) {
            CHECK(std::abs(cell.split->share_v1 + cell.split->share_v2 - 100.0) < 1e-9);
        }
        const double n0 = cell.result.states[0].total();
        double worst_drift = 0.0;
        bool in_bounds = true;
        for (std::size_t k = 0; k < cell.result.states.size(); ++k) {
            worst_drift =
                std::max(worst_drift, std::abs(cell.result.states[k].total() - n0) / n0);
            const ControlPoint& u = cell.result.controls[k];
            in_bounds = in_bounds && u.u1 >= 0.0 && u.u1 <= 1.0 && u.u2 >= 0.0 && u.u2 <= 1.0;
        }
        CHECK(worst_drift < 1e-9);
        CHECK(in_bounds);
        const AdjointPoint& terminal = cell.result.adjoints[cell.result.adjoints.size() - 1];
        CHECK(terminal.l_s == 0.0);
        CHECK(terminal.l_i == 0.0);
    }
}

TEST_CASE("grid completes even when individual cells do not converge") {
    Scenario base = base_scenario(0.74, 0.67, 20.0, 0.2);
    base.sweep_cfg.max_iterations = 1;
    base.sweep_cfg.convergence_tol = 1e-15;
    const auto cells = rate_sensitivity_grid(base, 0.05, 2);
    REQUIRE(cells.size() == 17);
    for (const auto& cell : cells) {
        CHECK_FALSE(cell.result.converged);
        CHECK(cell.result.iterations == 1);
    }
}

TEST_CASE("parallel and serial grids agree bit for bit") {
    Scenario base = base_scenario(0.74, 0.67, 15.0, 0.25);
    const auto serial = rate_sensitivity_grid(base, 0.05, 1);
    const auto parallel = rate_sensitivity_grid(base, 0.05, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t c = 0; c < serial.size(); ++c) {
        CHECK(serial[c].label == parallel[c].label);
        CHECK(serial[c].result.objective == parallel[c].result.objective);
        for (std::size_t k = 0; k < serial[c].result.controls.size(); ++k) {
            CHECK(serial[c].result.controls[k].u1 == parallel[c].result.controls[k].u1);
            CHECK(serial[c].result.controls[k].u2 == parallel[c].result.controls[k].u2);
        }
    }
}

TEST_CASE("efficacy sweep skips values violating the efficacy ordering") {
    Scenario base = base_scenario(0.74, 0.67, 15.0, 0.25);

    // sweeping theta1 with theta2 fixed at 0.67: values at or below 0.67 are out
    const double values[] = {0.75, 0.74, 0.67, 0.5, -0.1, 1.2};
    const auto outcome =
        efficacy_sensitivity_sweep(base, FixedEfficacy::kTheta2, values, 0.05, 2);
    CHECK(outcome.cells.size() == 2);
    REQUIRE(outcome.skipped_values.size() == 4);
    CHECK(outcome.skipped_values[0] == 0.67);
    CHECK(outcome.skipped_values[1] == 0.5);
    CHECK(outcome.skipped_values[2] == -0.1);
    CHECK(outcome.skipped_values[3] == 1.2);

    // swept cells re-derive the cost weight of the swept vaccine
    CHECK(outcome.cells[0].params.theta1 == 0.75);
    CHECK(outcome.cells[0].params.b1 == doctest::Approx(7500.0));
    CHECK(outcome.cells[0].params.theta2 == 0.67);
}

TEST_CASE("efficacy sweep in the other direction") {
    Scenario base = base_scenario(0.74, 0.67, 15.0, 0.25);
    const double values[] = {0.67, 0.66, 0.74, 0.8};
    const auto outcome =
        efficacy_sensitivity_sweep(base, FixedEfficacy::kTheta1, values, 0.05, 1);
    CHECK(outcome.cells.size() == 2);  // 0.74 and 0.8 violate theta2 < theta1
    CHECK(outcome.cells[0].params.theta2 == 0.67);
    CHECK(outcome.cells[0].params.b2 == doctest::Approx(6700.0));
    CHECK(outcome.cells[1].params.theta2 == 0.66);
    CHECK(outcome.cells[0].params.theta1 == 0.74);
}

TEST_CASE("infected comparison optimizes each availability policy") {
    Scenario base = base_scenario(0.74, 0.67, 20.0, 0.1);
    const InfectedComparison cmp = infected_comparison(base);

    for (std::size_t k = 0; k < cmp.only_v1.controls.size(); ++k) {
        CHECK(cmp.only_v1.controls[k].u2 == 0.0);
        CHECK(cmp.only_v2.controls[k].u1 == 0.0);
    }
    CHECK(cmp.cumulative_only_v1 > 0.0);
    CHECK(cmp.cumulative_both > 0.0);
    CHECK(cmp.cumulative_only_v2 > 0.0);

    const std::vector<double> series = infected_series(cmp.both.states);
    CHECK(series.size() == base.grid.node_count());
    CHECK(series[0] == default_initial_state().i);
}

TEST_CASE("forcing oracle: disabling both controls reproduces the uncontrolled epidemic") {
    Scenario base = base_scenario(0.74, 0.67, 20.0, 0.1);
    base.sweep_cfg.enable_u1 = false;
    base.sweep_cfg.enable_u2 = false;
    const SweepResult forced =
        run_sweep(base.x0, base.params, base.grid, base.sweep_cfg);
    const StateTrajectory uncontrolled =
        integrate_forward(base.x0, ControlSchedule(base.grid), base.params, base.grid);
    for (std::size_t k = 0; k < uncontrolled.size(); ++k) {
        CHECK(std::memcmp(&forced.states[k], &uncontrolled[k], sizeof(StatePoint)) == 0);
    }
}

TEST_CASE("raising both cost weights does not increase total vaccination effort") {
    Scenario base = base_scenario(0.74, 0.67, 60.0, 0.1);
    const auto effort = [&](const SweepResult& r) {
        std::vector<double> rate(r.states.size());
        for (std::size_t k = 0; k < r.states.size(); ++k) {
            rate[k] = (r.controls[k].u1 + r.controls[k].u2) * r.states[k].s;
        }
        return trapezoid(rate, base.grid.dt());
    };

    const SweepResult cheap = run_sweep(base.x0, base.params, base.grid, base.sweep_cfg);
    Scenario costly = base;
    costly.params.b1 *= 10.0;
    costly.params.b2 *= 10.0;
    const SweepResult expensive =
        run_sweep(costly.x0, costly.params, costly.grid, costly.sweep_cfg);
    CHECK(effort(expensive) <= 1.01 * effort(cheap));
}
