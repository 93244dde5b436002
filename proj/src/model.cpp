#include "vaxopt/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vaxopt {

namespace {

void require(bool ok, const std::string& constraint) {
    if (!ok) throw std::invalid_argument("ModelParams: " + constraint);
}

double positive_total(const StatePoint& x, const char* where) {
    const double n = x.total();
    if (!(n > 0.0)) {
        throw NumericalError(std::string(where) +
                             ": total population must be positive, got N = " +
                             std::to_string(n));
    }
    return n;
}

}  // namespace

double derived_transmission_rate(double beta, double theta) {
    if (!(beta >= 0.0)) throw std::domain_error("derived_transmission_rate: beta must be >= 0");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error("derived_transmission_rate: theta must lie in [0, 1]");
    return beta * (1.0 - theta);
}

double ModelParams::beta1() const { return derived_transmission_rate(beta, theta1); }
double ModelParams::beta2() const { return derived_transmission_rate(beta, theta2); }

void ModelParams::validate() const {
    require(beta >= 0.0, "beta must be >= 0");
    require(sigma >= 0.0, "sigma must be >= 0");
    require(gamma >= 0.0, "gamma must be >= 0");
    require(delta >= 0.0, "delta must be >= 0");
    require(alpha1 >= 0.0 && alpha2 >= 0.0, "alpha1, alpha2 must be >= 0");
    require(eps1 >= 0.0 && eps2 >= 0.0, "eps1, eps2 must be >= 0");
    require(theta2 >= 0.0, "theta2 must be >= 0");
    require(theta2 <= theta1, "theta2 must not exceed theta1");
    require(theta1 < 1.0, "theta1 must be < 1");
    require(b1 > 0.0, "b1 must be > 0");
    require(b2 > 0.0, "b2 must be > 0");
    require(horizon_days > 0.0, "horizon_days must be > 0");
}

ModelParams ModelParams::with_default_costs(double theta1, double theta2) {
    ModelParams p;
    p.theta1 = theta1;
    p.theta2 = theta2;
    p.b1 = theta1 * 1e4;
    p.b2 = theta2 * 1e4;
    return p;
}

StatePoint default_initial_state() {
    return {2e8, 0.0, 0.0, 65124.0, 76603.0, 65124.0};
}

StatePoint state_rhs(double /*t*/, const StatePoint& x, const ControlPoint& u,
                     const ModelParams& p) {
    const double n = positive_total(x, "state_rhs");
    // Each flow is computed once and enters two compartments with opposite
    // signs, so the component sum cancels to rounding error.
    const double infect_s = p.beta * x.s * x.i / n;
    const double infect_v1 = p.beta1() * x.v1 * x.i / n;
    const double infect_v2 = p.beta2() * x.v2 * x.i / n;
    const double vacc1 = u.u1 * x.s;
    const double vacc2 = u.u2 * x.s;
    const double return1 = p.eps1 * x.v1;
    const double return2 = p.eps2 * x.v2;
    const double immun1 = p.alpha1 * x.v1;
    const double immun2 = p.alpha2 * x.v2;
    const double progress = p.sigma * x.e;
    const double recover = p.gamma * x.i;
    const double reinfect = p.delta * x.r;
    return {
        -infect_s - vacc1 - vacc2 + return1 + return2 + reinfect,
        vacc1 - infect_v1 - return1 - immun1,
        vacc2 - infect_v2 - return2 - immun2,
        infect_s + infect_v1 + infect_v2 - progress,
        progress - recover,
        recover - reinfect + immun1 + immun2,
    };
}

AdjointPoint adjoint_rhs(double /*t*/, const AdjointPoint& lam, const StatePoint& x,
                         const ControlPoint& u, const ModelParams& p) {
    const double n = positive_total(x, "adjoint_rhs");
    const double b1 = p.beta1();
    const double b2 = p.beta2();
    const double i_nn = x.i / (n * n);

    const double d_s = i_nn * (b1 * x.v1 * (lam.l_e - lam.l_v1) +
                               b2 * x.v2 * (lam.l_e - lam.l_v2) +
                               p.beta * (n - x.s) * (lam.l_s - lam.l_e)) +
                       u.u1 * (lam.l_s - lam.l_v1) + u.u2 * (lam.l_s - lam.l_v2);

    const double d_v1 = i_nn * (p.beta * x.s * (lam.l_e - lam.l_s) +
                                b2 * x.v2 * (lam.l_e - lam.l_v2) +
                                b1 * (n - x.v1) * (lam.l_v1 - lam.l_e)) +
                        p.eps1 * (lam.l_v1 - lam.l_s) + p.alpha1 * (lam.l_v1 - lam.l_r);

    const double d_v2 = i_nn * (p.beta * x.s * (lam.l_e - lam.l_s) +
                                b1 * x.v1 * (lam.l_e - lam.l_v1) +
                                b2 * (n - x.v2) * (lam.l_v2 - lam.l_e)) +
                        p.eps2 * (lam.l_v2 - lam.l_s) + p.alpha2 * (lam.l_v2 - lam.l_r);

    const double d_e = i_nn * (p.beta * x.s * (lam.l_e - lam.l_s) +
                               b1 * x.v1 * (lam.l_e - lam.l_v1) +
                               b2 * x.v2 * (lam.l_e - lam.l_v2)) +
                       p.sigma * (lam.l_e - lam.l_i);

    // The objective's running cost contributes the constant -1 source term.
    const double d_i = (n - x.i) / (n * n) *
                           (p.beta * x.s * (lam.l_s - lam.l_e) +
                            b1 * x.v1 * (lam.l_v1 - lam.l_e) +
                            b2 * x.v2 * (lam.l_v2 - lam.l_e)) +
                       p.gamma * (lam.l_i - lam.l_r) - 1.0;

    const double d_r = i_nn * (p.beta * x.s * (lam.l_e - lam.l_s) +
                               b1 * x.v1 * (lam.l_e - lam.l_v1) +
                               b2 * x.v2 * (lam.l_e - lam.l_v2)) +
                       p.delta * (lam.l_r - lam.l_s);

    return {d_s, d_v1, d_v2, d_e, d_i, d_r};
}

double hamiltonian(const StatePoint& x, const AdjointPoint& lam, const ControlPoint& u,
                   const ModelParams& p) {
    const double n = positive_total(x, "hamiltonian");
    const double b1 = p.beta1();
    const double b2 = p.beta2();
    return x.i + p.b1 * u.u1 * u.u1 + p.b2 * u.u2 * u.u2 +
           u.u1 * x.s * (lam.l_v1 - lam.l_s) + u.u2 * x.s * (lam.l_v2 - lam.l_s) +
           p.beta * x.s * x.i / n * (lam.l_e - lam.l_s) +
           b1 * x.v1 * x.i / n * (lam.l_e - lam.l_v1) +
           b2 * x.v2 * x.i / n * (lam.l_e - lam.l_v2) +
           p.eps1 * x.v1 * (lam.l_s - lam.l_v1) + p.eps2 * x.v2 * (lam.l_s - lam.l_v2) +
           p.alpha1 * x.v1 * (lam.l_r - lam.l_v1) + p.alpha2 * x.v2 * (lam.l_r - lam.l_v2) +
           p.sigma * x.e * (lam.l_i - lam.l_e) + p.delta * x.r * (lam.l_s - lam.l_r) +
           p.gamma * x.i * (lam.l_r - lam.l_i);
}

double objective_integrand(const StatePoint& x, const ControlPoint& u,
                           const ModelParams& p) {
    return x.i + p.b1 * u.u1 * u.u1 + p.b2 * u.u2 * u.u2;
}

}  // namespace vaxopt
