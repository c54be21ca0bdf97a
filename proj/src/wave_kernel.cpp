#include "fractalwave/wave_kernel.hpp"

#include <cmath>
#include <complex>

#include "fractalwave/quadrature.hpp"

namespace fractalwave {

namespace {

void check_params(const WaveParams& p) {
    if (!(p.beta >= 0.0)) throw validation_error("wave kernel: beta must be >= 0");
    if (!(p.lambda >= 0.0)) throw validation_error("wave kernel: lambda must be >= 0");
}

// (exp(a*x) - 1) / a, continuous through a == 0.
double expm1_over(double a, double x) {
    if (a == 0.0) return x;
    return std::expm1(a * x) / a;
}

std::complex<double> expm1_over(std::complex<double> a, double x) {
    return (std::exp(a * x) - 1.0) / a;
}

// sinh(sqrt(w))/sqrt(w) and cosh(sqrt(w)) as entire functions of w; valid for
// either sign of w, used when |w| is small.
double sinhc_series(double w) {
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 24; ++m) {
        term *= w / (2.0 * m * (2.0 * m + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double cosh_series(double w) {
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 24; ++m) {
        term *= w / (2.0 * m * (2.0 * m - 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Closed forms for integral_V2 / integral_V_shifted cancel catastrophically
// as lambda -> beta^2; inside this band the integrands are non-oscillatory
// and adaptive quadrature is both cheap and accurate.
bool near_critical(const WaveParams& p, double horizon) {
    const double d = p.beta * p.beta - p.lambda;
    const double scale = std::max(1.0, p.beta * p.beta);
    const double h2 = std::max(horizon * horizon, 1.0);
    return std::abs(d) * h2 < 1e-2 || std::abs(d) < 1e-8 * scale;
}

} // namespace

double kernel_V(const WaveParams& p, double t) {
    check_params(p);
    if (t < 0.0) throw validation_error("kernel_V: t must be >= 0");
    const double d = p.beta * p.beta - p.lambda;
    const double w = d * t * t;
    if (std::abs(w) < 0.5) return t * std::exp(-p.beta * t) * sinhc_series(w);
    if (d > 0.0) {
        // overdamped; omega <= beta since lambda >= 0, so both exponents are <= 0
        const double om = std::sqrt(d);
        return (std::exp((om - p.beta) * t) - std::exp(-(om + p.beta) * t)) / (2.0 * om);
    }
    const double om = std::sqrt(-d);
    return std::exp(-p.beta * t) * std::sin(om * t) / om;
}

double kernel_Vdot(const WaveParams& p, double t) {
    check_params(p);
    if (t < 0.0) throw validation_error("kernel_Vdot: t must be >= 0");
    const double d = p.beta * p.beta - p.lambda;
    const double w = d * t * t;
    if (std::abs(w) < 0.5)
        return std::exp(-p.beta * t) * (cosh_series(w) - p.beta * t * sinhc_series(w));
    if (d > 0.0) {
        const double om = std::sqrt(d);
        const double ep = std::exp((om - p.beta) * t);
        const double en = std::exp(-(om + p.beta) * t);
        return 0.5 * ((1.0 - p.beta / om) * ep + (1.0 + p.beta / om) * en);
    }
    const double om = std::sqrt(-d);
    return std::exp(-p.beta * t) * (std::cos(om * t) - p.beta / om * std::sin(om * t));
}

double integral_V2(const WaveParams& p, double T) {
    check_params(p);
    if (T < 0.0) throw validation_error("integral_V2: T must be >= 0");
    if (T == 0.0) return 0.0;
    const double b = p.beta;
    if (near_critical(p, T)) {
        return integrate([&](double t) { const double v = kernel_V(p, t); return v * v; },
                         0.0, T, 1e-12);
    }
    const double e0 = expm1_over(-2.0 * b, T);
    const double d = b * b - p.lambda;
    if (d < 0.0) {
        const double om = std::sqrt(-d);
        const double ec = expm1_over(std::complex<double>(-2.0 * b, 2.0 * om), T).real();
        return (e0 - ec) / (2.0 * (p.lambda - b * b));
    }
    const double om = std::sqrt(d);
    const double eh = 0.5 * (expm1_over(2.0 * (om - b), T) + expm1_over(-2.0 * (om + b), T));
    return (eh - e0) / (2.0 * d);
}

double integral_V_shifted(const WaveParams& p, double s, double t) {
    check_params(p);
    if (s < 0.0 || t < 0.0) throw validation_error("integral_V_shifted: s, t must be >= 0");
    if (s == 0.0) return 0.0;
    const double b = p.beta;
    if (near_critical(p, s + t)) {
        return integrate([&](double r) { return kernel_V(p, t + r) * kernel_V(p, r); },
                         0.0, s, 1e-12);
    }
    const double e0 = expm1_over(-2.0 * b, s);
    const double d = b * b - p.lambda;
    if (d < 0.0) {
        const double om = std::sqrt(-d);
        // V(t+r)V(r) = e^{-bt} e^{-2br} [cos(om t) - cos(om t + 2 om r)] / (2 om^2)
        const std::complex<double> ph(0.0, om * t);
        const double cc =
            (std::exp(ph) * expm1_over(std::complex<double>(-2.0 * b, 2.0 * om), s)).real();
        return std::exp(-b * t) * (std::cos(om * t) * e0 - cc) / (2.0 * om * om);
    }
    const double om = std::sqrt(d);
    // exp(-b t) folded into each term to avoid overflow
    const double ep = std::exp((om - b) * t);
    const double en = std::exp(-(om + b) * t);
    const double ch = 0.5 * (ep * expm1_over(2.0 * (om - b), s) + en * expm1_over(-2.0 * (om + b), s));
    const double c0 = 0.5 * (ep + en); // e^{-bt} cosh(om t)
    return (ch - c0 * e0) / (2.0 * om * om);
}

double increment_variance(const WaveParams& p, double s, double t) {
    check_params(p);
    if (s < 0.0 || t < 0.0) throw validation_error("increment_variance: s, t must be >= 0");
    if (t == 0.0) return 0.0;
    const double tail = integral_V2(p, t);
    if (s == 0.0) return tail;

    const double b = p.beta;
    if (near_critical(p, s + t)) {
        const double head =
            integrate([&](double r) {
                const double dv = kernel_V(p, t + r) - kernel_V(p, r);
                return dv * dv;
            }, 0.0, s, 1e-12);
        return head + tail;
    }

    // V(t+r) - V(r) = e^{-br}/om * (A trig(om r) + B cotrig(om r)) with
    // A = e^{-bt} cos(om t) - 1 and B = e^{-bt} sin(om t) (hyperbolic twins in
    // the overdamped case); both are O(t), so no large terms cancel.
    const double e0 = expm1_over(-2.0 * b, s);
    const double d = b * b - p.lambda;
    double head;
    if (d < 0.0) {
        const double om = std::sqrt(-d);
        const double ebt = std::exp(-b * t);
        const double av = ebt * std::cos(om * t) - 1.0;
        const double bv = ebt * std::sin(om * t);
        const std::complex<double> ec =
            expm1_over(std::complex<double>(-2.0 * b, 2.0 * om), s);
        const double sin2 = 0.5 * (e0 - ec.real());
        const double cos2 = 0.5 * (e0 + ec.real());
        const double sincos = 0.5 * ec.imag();
        head = (av * av * sin2 + 2.0 * av * bv * sincos + bv * bv * cos2) / (-d);
    } else {
        const double om = std::sqrt(d);
        const double ep = std::exp((om - b) * t); // e^{-bt} e^{om t}, exponent <= 0
        const double en = std::exp(-(om + b) * t);
        const double av = 0.5 * (ep + en) - 1.0; // e^{-bt} cosh(om t) - 1
        const double bv = 0.5 * (ep - en);       // e^{-bt} sinh(om t)
        const double eplus = expm1_over(2.0 * (om - b), s);
        const double eminus = expm1_over(-2.0 * (om + b), s);
        const double eh = 0.5 * (eplus + eminus);
        const double sinh2 = 0.5 * (eh - e0);
        const double cosh2 = 0.5 * (eh + e0);
        const double sc = 0.25 * (eplus - eminus);
        head = (av * av * sinh2 + 2.0 * av * bv * sc + bv * bv * cosh2) / d;
    }
    return head + tail;
}

double laplace_V2(double alpha, const WaveParams& p) {
    check_params(p);
    if (!(alpha > 0.0)) throw validation_error("laplace_V2: alpha must be > 0");
    return 1.0 / (4.0 * (alpha + p.beta) * (alpha * alpha + 2.0 * alpha * p.beta + p.lambda));
}

double stationary_variance(const WaveParams& p) {
    check_params(p);
    if (p.beta == 0.0)
        throw validation_error(
            "stationary_variance: beta = 0 gives linearly growing variance (no limit)");
    if (p.lambda == 0.0)
        throw validation_error(
            "stationary_variance: lambda = 0 (zero mode) has no square-integrable kernel");
    return 1.0 / (4.0 * p.beta * p.lambda);
}

double kernel_V_sup(double beta, double t) {
    if (beta < 0.0 || t < 0.0) throw validation_error("kernel_V_sup: beta, t must be >= 0");
    if (beta == 0.0) return t;
    // beta^{-1} e^{-beta t} sinh(beta t) = (1 - e^{-2 beta t}) / (2 beta)
    return -std::expm1(-2.0 * beta * t) / (2.0 * beta);
}

double kernel_Vdot_sup_bound(double beta, double T) {
    if (beta < 0.0 || T < 0.0) throw validation_error("kernel_Vdot_sup_bound: beta, T >= 0");
    return std::max(std::exp(beta * T), T);
}

ModeTransition mode_transition(const WaveParams& p, double h) {
    check_params(p);
    if (!(h > 0.0)) throw validation_error("mode_transition: step must be > 0");
    const double v = kernel_V(p, h);
    const double vd = kernel_Vdot(p, h);
    const double i2 = integral_V2(p, h);
    ModeTransition tr;
    tr.step = h;
    tr.mean << vd + 2.0 * p.beta * v, v,
               -p.lambda * v, vd;
    const double q12 = 0.5 * v * v;
    tr.noise << i2, q12,
                q12, v * vd + p.beta * v * v + p.lambda * i2;
    return tr;
}

Eigen::Matrix2d noise_cholesky(const Eigen::Matrix2d& q) {
    const double scale = std::max({std::abs(q(0, 0)), std::abs(q(1, 1)), 1e-300});
    if (q.determinant() < -1e-12 * scale * scale || q(0, 0) < -1e-14 * scale ||
        q(1, 1) < -1e-14 * scale)
        throw numerical_error("noise covariance is not positive semi-definite");
    Eigen::Matrix2d l = Eigen::Matrix2d::Zero();
    const double q00 = std::max(q(0, 0), 0.0);
    l(0, 0) = std::sqrt(q00);
    if (l(0, 0) > 0.0) {
        l(1, 0) = q(0, 1) / l(0, 0);
        l(1, 1) = std::sqrt(std::max(q(1, 1) - l(1, 0) * l(1, 0), 0.0));
    } else {
        // pivot fallback: all variance sits in the second component
        l(1, 1) = std::sqrt(std::max(q(1, 1), 0.0));
    }
    return l;
}

} // namespace fractalwave
