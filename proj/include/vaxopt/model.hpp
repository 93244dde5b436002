#pragma once

#include "vaxopt/errors.hpp"

namespace vaxopt {

/// Epidemiological rates, vaccine efficacies and campaign cost weights for one
/// scenario. All rates are per day; efficacies are dimensionless fractions.
/// Vaccine 1 is the higher-efficacy (and conventionally more expensive) one.
struct ModelParams {
    double beta = 0.45;    ///< transmission rate
    double sigma = 0.25;   ///< latency rate (E -> I)
    double gamma = 0.07;   ///< recovery rate (I -> R)
    double delta = 0.65;   ///< reinfection rate (R -> S)
    double alpha1 = 0.08;  ///< vaccine-1 immunity rate (V1 -> R)
    double alpha2 = 0.08;  ///< vaccine-2 immunity rate (V2 -> R)
    double eps1 = 0.54;    ///< vaccine-1 return-to-susceptible rate (V1 -> S)
    double eps2 = 0.54;    ///< vaccine-2 return-to-susceptible rate (V2 -> S)
    double theta1 = 0.0;   ///< vaccine-1 efficacy, in [0, 1)
    double theta2 = 0.0;   ///< vaccine-2 efficacy, theta2 <= theta1
    double b1 = 0.0;       ///< control cost weight for u1, > 0
    double b2 = 0.0;       ///< control cost weight for u2, > 0
    double horizon_days = 60.0;  ///< campaign length T

    double b_total() const { return b1 + b2; }

    /// Transmission rates seen by vaccinated individuals.
    double beta1() const;
    double beta2() const;

    /// Throws std::invalid_argument naming the violated constraint.
    /// Note theta1 == theta2 is accepted here (symmetric-vaccine studies);
    /// config loading additionally enforces the strict ordering theta2 < theta1.
    void validate() const;

    /// Params with the default cost rule b_i = theta_i * 1e4 applied.
    static ModelParams with_default_costs(double theta1, double theta2);
};

/// Compartment populations at one instant (individuals, nonnegative).
struct StatePoint {
    double s{};   ///< susceptible
    double v1{};  ///< vaccinated with vaccine 1
    double v2{};  ///< vaccinated with vaccine 2
    double e{};   ///< exposed
    double i{};   ///< infected
    double r{};   ///< recovered

    /// Total population N. Constant along trajectories (no vital dynamics).
    double total() const { return s + v1 + v2 + e + i + r; }
};

/// Costate values at one instant. Zero at the terminal time (transversality).
struct AdjointPoint {
    double l_s{}, l_v1{}, l_v2{}, l_e{}, l_i{}, l_r{};
};

/// Vaccination fractions per day, each in [0, 1].
struct ControlPoint {
    double u1{}, u2{};
};

// Element-wise arithmetic used by the integrator and control mixing.

inline StatePoint operator+(const StatePoint& a, const StatePoint& b) {
    return {a.s + b.s, a.v1 + b.v1, a.v2 + b.v2, a.e + b.e, a.i + b.i, a.r + b.r};
}
inline StatePoint operator-(const StatePoint& a, const StatePoint& b) {
    return {a.s - b.s, a.v1 - b.v1, a.v2 - b.v2, a.e - b.e, a.i - b.i, a.r - b.r};
}
inline StatePoint operator*(double c, const StatePoint& a) {
    return {c * a.s, c * a.v1, c * a.v2, c * a.e, c * a.i, c * a.r};
}

inline AdjointPoint operator+(const AdjointPoint& a, const AdjointPoint& b) {
    return {a.l_s + b.l_s, a.l_v1 + b.l_v1, a.l_v2 + b.l_v2,
            a.l_e + b.l_e, a.l_i + b.l_i,   a.l_r + b.l_r};
}
inline AdjointPoint operator-(const AdjointPoint& a, const AdjointPoint& b) {
    return {a.l_s - b.l_s, a.l_v1 - b.l_v1, a.l_v2 - b.l_v2,
            a.l_e - b.l_e, a.l_i - b.l_i,   a.l_r - b.l_r};
}
inline AdjointPoint operator*(double c, const AdjointPoint& a) {
    return {c * a.l_s, c * a.l_v1, c * a.l_v2, c * a.l_e, c * a.l_i, c * a.l_r};
}

inline ControlPoint operator+(const ControlPoint& a, const ControlPoint& b) {
    return {a.u1 + b.u1, a.u2 + b.u2};
}
inline ControlPoint operator-(const ControlPoint& a, const ControlPoint& b) {
    return {a.u1 - b.u1, a.u2 - b.u2};
}
inline ControlPoint operator*(double c, const ControlPoint& a) {
    return {c * a.u1, c * a.u2};
}

/// Transmission rate for a vaccinated individual: beta * (1 - theta).
/// Throws std::domain_error for beta < 0 or theta outside [0, 1].
double derived_transmission_rate(double beta, double theta);

/// Right-hand side of the six-compartment state system. The six components
/// sum to zero identically (every flow appears once with each sign), so N is
/// conserved. N is recomputed from x on every call; N <= 0 raises
/// NumericalError.
StatePoint state_rhs(double t, const StatePoint& x, const ControlPoint& u,
                     const ModelParams& p);

/// Right-hand side of the adjoint system, equal to minus the state gradient
/// of the Hamiltonian (including the dependence through N).
AdjointPoint adjoint_rhs(double t, const AdjointPoint& lam, const StatePoint& x,
                         const ControlPoint& u, const ModelParams& p);

/// Pontryagin Hamiltonian of the control problem.
double hamiltonian(const StatePoint& x, const AdjointPoint& lam,
                   const ControlPoint& u, const ModelParams& p);

/// Running cost: I + b1*u1^2 + b2*u2^2.
double objective_integrand(const StatePoint& x, const ControlPoint& u,
                           const ModelParams& p);

/// Campaign-start compartment populations (Brazil, May 2020 data).
StatePoint default_initial_state();

}  // namespace vaxopt
