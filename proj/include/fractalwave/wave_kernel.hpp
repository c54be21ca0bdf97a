#pragma once

#include <Eigen/Dense>

#include "fractalwave/errors.hpp"

namespace fractalwave {

enum class DampingRegime { overdamped, critical, underdamped };

/// One mode of the damped wave system: v'' + 2*beta*v' + lambda*v = noise.
struct WaveParams {
    double beta = 0.0;    // damping coefficient, 1/time
    double lambda = 0.0;  // mode eigenvalue, 1/time^2

    DampingRegime regime() const {
        const double d = beta * beta - lambda;
        if (d > 0) return DampingRegime::overdamped;
        if (d < 0) return DampingRegime::underdamped;
        return DampingRegime::critical;
    }
};

/// Fundamental solution V(t) of the mode ODE with v(0)=0, v'(0)=1.
/// Near lambda == beta^2 the evaluation switches to an entire-series form, so
/// the value is continuous across the regime boundary.
double kernel_V(const WaveParams& p, double t);

/// d/dt of kernel_V.
double kernel_Vdot(const WaveParams& p, double t);

/// Integral of V^2 over [0, T]. Closed form per regime; adaptive quadrature in
/// the band around lambda == beta^2 where the closed forms cancel.
double integral_V2(const WaveParams& p, double T);

/// Cross integral of V(t+r) V(r) dr over r in [0, s].
double integral_V_shifted(const WaveParams& p, double s, double t);

/// E[(Y(s+t) - Y(s))^2] for one mode driven from zero: decomposes as
/// int_0^s (V(t+r) - V(r))^2 dr + int_0^t V(r)^2 dr. Evaluated in a form
/// stable for lags far below the mode period.
double increment_variance(const WaveParams& p, double s, double t);

/// Integral of exp(-2 alpha t) V(t)^2 over [0, inf): equals
/// 1 / (4 (alpha+beta) (alpha^2 + 2 alpha beta + lambda)).
double laplace_V2(double alpha, const WaveParams& p);

/// Limit variance of the mode amplitude, 1/(4 beta lambda). Requires beta > 0
/// and lambda > 0; anything else has no finite limit.
double stationary_variance(const WaveParams& p);

/// sup over lambda >= 0 of |V(t)|; attained at lambda = 0.
double kernel_V_sup(double beta, double t);

/// Upper bound for sup over t in [0,T], lambda >= 0 of |V'(t)|.
double kernel_Vdot_sup_bound(double beta, double T);

/// Exact one-step law of the mode pair (Y, Ydot) over a step of size h:
/// X(t+h) = mean * X(t) + xi with xi ~ Normal(0, noise).
struct ModeTransition {
    double step = 0.0;
    Eigen::Matrix2d mean = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d noise = Eigen::Matrix2d::Zero();
};

ModeTransition mode_transition(const WaveParams& p, double h);

/// Lower-triangular factor L with L L^T = noise, tolerating slightly
/// indefinite input from roundoff. Strongly non-PSD input throws.
Eigen::Matrix2d noise_cholesky(const Eigen::Matrix2d& q);

} // namespace fractalwave
