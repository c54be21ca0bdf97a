#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fractalwave/quadrature.hpp"
#include "fractalwave/wave_kernel.hpp"

using namespace fractalwave;
using std::numbers::pi;

namespace {

// high-order Taylor matrix exponential with scaling and squaring; test oracle
// independent of the closed forms under test
Eigen::Matrix2d matexp_oracle(const Eigen::Matrix2d& a) {
    int squarings = 0;
    double norm = a.cwiseAbs().maxCoeff();
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    const Eigen::Matrix2d b = a / std::pow(2.0, squarings);
    Eigen::Matrix2d term = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

const std::vector<double> kBetas{0.0, 0.5, 1.0, 2.0};
const std::vector<double> kLambdas{0.0, 0.25, 1.0, 4.0, 25.0, 1000.0};

} // namespace

TEST_CASE("gk15 quadrature reproduces easy integrals") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) == doctest::Approx(1.0).epsilon(1e-11));
    // oscillatory
    CHECK(integrate([](double x) { return std::sin(50.0 * x) * std::sin(50.0 * x); }, 0.0, 2.0 * pi)
          == doctest::Approx(pi).epsilon(1e-10));
}

TEST_CASE("kernel_V closed-form spot values") {
    CHECK(kernel_V({0.0, 1.0}, pi / 2) == doctest::Approx(1.0).epsilon(1e-14));
    // critical branch: t e^{-t}
    CHECK(kernel_V({1.0, 1.0}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    for (double beta : kBetas)
        for (double lambda : kLambdas) CHECK(kernel_V({beta, lambda}, 0.0) == 0.0);
    CHECK_THROWS_AS(kernel_V({1.0, 1.0}, -0.1), validation_error);
    CHECK_THROWS_AS(kernel_V({-1.0, 1.0}, 0.1), validation_error);
}

TEST_CASE("kernel_Vdot spot values and finite-difference oracle") {
    for (double beta : kBetas)
        for (double lambda : kLambdas) CHECK(kernel_Vdot({beta, lambda}, 0.0) == 1.0);
    CHECK(kernel_Vdot({0.0, 1.0}, pi) == doctest::Approx(-1.0).epsilon(1e-13));
    // overdamped central difference
    const WaveParams p{2.0, 1.0};
    const double h = 1e-6;
    const double fd = (kernel_V(p, 1.0 + h) - kernel_V(p, 1.0 - h)) / (2.0 * h);
    CHECK(kernel_Vdot(p, 1.0) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("branch continuity across lambda = beta^2") {
    const double beta = 1.0;
    for (double t : {0.1, 1.0, 5.0}) {
        const double mid = kernel_V({beta, 1.0}, t);
        const double midd = kernel_Vdot({beta, 1.0}, t);
        for (double eps : {1e-7, -1e-7}) {
            CHECK(std::abs(kernel_V({beta, 1.0 + eps}, t) - mid) < 1e-6);
            CHECK(std::abs(kernel_Vdot({beta, 1.0 + eps}, t) - midd) < 1e-6);
        }
    }
}

TEST_CASE("ODE residual via finite differences over all regimes") {
    const double h = 1e-5;
    for (double beta : kBetas)
        for (double lambda : kLambdas)
            for (double t : {0.1, 0.7, 2.0, 5.0}) {
                const WaveParams p{beta, lambda};
                const double vpp =
                    (kernel_V(p, t + h) - 2.0 * kernel_V(p, t) + kernel_V(p, t - h)) / (h * h);
                const double residual =
                    vpp + 2.0 * beta * kernel_Vdot(p, t) + lambda * kernel_V(p, t);
                CHECK(std::abs(residual) < 1e-4 * std::max(1.0, lambda));
            }
}

TEST_CASE("integral_V2: classical values and quadrature oracle") {
    // full periods of sin^2
    CHECK(integral_V2({0.0, 1.0}, 2.0 * pi) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(integral_V2({1.0, 1.0}, 0.0) == 0.0);
    // T = 40 is an infinity proxy: limit is 1/(4 beta lambda)
    CHECK(integral_V2({1.0, 1.0}, 40.0) == doctest::Approx(0.25).epsilon(1e-10));
    for (double beta : kBetas)
        for (double lambda : kLambdas)
            for (double T : {0.3, 2.0, 7.0}) {
                const WaveParams p{beta, lambda};
                const double quad = integrate(
                    [&](double t) { const double v = kernel_V(p, t); return v * v; }, 0.0, T,
                    1e-12);
                CHECK(integral_V2(p, T) ==
                      doctest::Approx(quad).epsilon(1e-9).scale(std::max(quad, 1e-12)));
            }
}

TEST_CASE("integral_V_shifted matches quadrature") {
    for (double beta : kBetas)
        for (double lambda : kLambdas)
            for (double t : {0.05, 0.8}) {
                const WaveParams p{beta, lambda};
                const double s = 1.7;
                const double quad = integrate(
                    [&](double r) { return kernel_V(p, t + r) * kernel_V(p, r); }, 0.0, s, 1e-12);
                CHECK(integral_V_shifted(p, s, t) == doctest::Approx(quad).epsilon(1e-8).scale(1.0));
            }
}

TEST_CASE("increment_variance: limits and quadrature oracle") {
    const WaveParams p{1.0, 10.0};
    CHECK(increment_variance(p, 1.0, 0.0) == 0.0);
    CHECK(increment_variance(p, 0.0, 0.7) == doctest::Approx(integral_V2(p, 0.7)).epsilon(1e-13));
    for (double beta : {0.0, 1.0})
        for (double lambda : {0.5, 1.0, 100.0, 1e6})
            for (double t : {1e-3, 0.1}) {
                const WaveParams q{beta, lambda};
                const double s = 2.0;
                const double head = integrate(
                    [&](double r) {
                        const double dv = kernel_V(q, t + r) - kernel_V(q, r);
                        return dv * dv;
                    }, 0.0, s, 1e-13);
                const double expected = head + integral_V2(q, t);
                CHECK(increment_variance(q, s, t) ==
                      doctest::Approx(expected).epsilon(1e-8));
            }
}

TEST_CASE("Laplace transform of V^2: closed form and quadrature across regimes") {
    CHECK(laplace_V2(1.0, {0.0, 1.0}) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(laplace_V2(1.0, {1.0, 1.0}) == doctest::Approx(0.03125).epsilon(1e-14));
    CHECK(laplace_V2(0.5, {2.0, 1.0}) == doctest::Approx(1.0 / 32.5).epsilon(1e-14));
    CHECK_THROWS_AS(laplace_V2(0.0, {1.0, 1.0}), validation_error);
    CHECK_THROWS_AS(laplace_V2(-1.0, {1.0, 1.0}), validation_error);

    for (double alpha : {0.3, 1.0, 2.5})
        for (double beta : {0.0, 1.0, 2.0})
            for (double lambda : {0.0, 1.0, beta * beta, 30.0}) {
                const WaveParams p{beta, lambda};
                const double closed = laplace_V2(alpha, p);
                // e^{-2 alpha t} V^2 decays like e^{-2 alpha t} t^2 at worst
                const double horizon = 60.0 / alpha;
                const double quad = integrate(
                    [&](double t) {
                        const double v = kernel_V(p, t);
                        return std::exp(-2.0 * alpha * t) * v * v;
                    }, 0.0, horizon, 1e-12);
                CHECK(closed == doctest::Approx(quad).epsilon(1e-9));
            }
}

TEST_CASE("stationary variance values and domain errors") {
    CHECK(stationary_variance({1.0, pi * pi}) == doctest::Approx(1.0 / (4.0 * pi * pi)).epsilon(1e-14));
    CHECK(stationary_variance({0.5, 4.0}) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK_THROWS_AS(stationary_variance({0.0, 1.0}), validation_error);
    CHECK_THROWS_AS(stationary_variance({1.0, 0.0}), validation_error);
}

TEST_CASE("mode transition: matrix exponential oracle and Q identities") {
    for (double beta : kBetas)
        for (double lambda : kLambdas)
            for (double h : {0.1, 0.5}) {
                const WaveParams p{beta, lambda};
                const ModeTransition tr = mode_transition(p, h);
                // right column is (V, Vdot)
                CHECK(tr.mean(0, 1) == doctest::Approx(kernel_V(p, h)).epsilon(1e-13));
                CHECK(tr.mean(1, 1) == doctest::Approx(kernel_Vdot(p, h)).epsilon(1e-13));
                Eigen::Matrix2d a;
                a << 0.0, 1.0, -lambda, -2.0 * beta;
                const Eigen::Matrix2d expected = matexp_oracle(a * h);
                CHECK((tr.mean - expected).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, lambda));

                // Q12 = V^2/2 and Q22 reduction against direct quadrature
                const double q12 = integrate(
                    [&](double s) { return kernel_V(p, s) * kernel_Vdot(p, s); }, 0.0, h, 1e-12);
                const double q22 = integrate(
                    [&](double s) { const double vd = kernel_Vdot(p, s); return vd * vd; }, 0.0,
                    h, 1e-12);
                CHECK(tr.noise(0, 1) == doctest::Approx(q12).epsilon(1e-8).scale(1.0));
                CHECK(tr.noise(1, 1) == doctest::Approx(q22).epsilon(1e-8).scale(1.0));
            }
}

TEST_CASE("mode transition: integrator limit beta = lambda = 0") {
    const ModeTransition tr = mode_transition({0.0, 0.0}, 0.25);
    Eigen::Matrix2d mean_expected, noise_expected;
    const double h = 0.25;
    mean_expected << 1.0, h, 0.0, 1.0;
    noise_expected << h * h * h / 3.0, h * h / 2.0, h * h / 2.0, h;
    CHECK((tr.mean - mean_expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((tr.noise - noise_expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Chapman-Kolmogorov composition of transitions") {
    for (double beta : kBetas)
        for (double lambda : kLambdas) {
            const WaveParams p{beta, lambda};
            const double h = 0.8;
            const ModeTransition full = mode_transition(p, h);
            const ModeTransition half = mode_transition(p, h / 2.0);
            const Eigen::Matrix2d mean2 = half.mean * half.mean;
            const Eigen::Matrix2d noise2 =
                half.mean * half.noise * half.mean.transpose() + half.noise;
            CHECK((full.mean - mean2).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, lambda));
            CHECK((full.noise - noise2).cwiseAbs().maxCoeff() < 1e-10);
        }
}

TEST_CASE("semigroup property of the mean matrix") {
    const WaveParams p{0.7, 13.0};
    const Eigen::Matrix2d m1 = mode_transition(p, 0.3).mean;
    const Eigen::Matrix2d m2 = mode_transition(p, 0.45).mean;
    const Eigen::Matrix2d m12 = mode_transition(p, 0.75).mean;
    CHECK((m12 - m2 * m1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kernel sup laws") {
    // sup over lambda of |V| is attained at lambda = 0
    for (double t : {0.1, 1.0, 5.0}) {
        const double cap = kernel_V_sup(1.0, t);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double lambda = 1e-3 * std::pow(1.02, i);
            worst = std::max(worst, std::abs(kernel_V({1.0, lambda}, t)));
        }
        CHECK(worst <= cap * (1.0 + 1e-12));
        CHECK(kernel_V({1.0, 0.0}, t) == doctest::Approx(cap).epsilon(1e-12));
        // beta = 0: sup equals t
        CHECK(kernel_V({0.0, 0.0}, t) == doctest::Approx(t).epsilon(1e-12));
    }
    // |Vdot| <= e^{beta T} or T
    const double T = 5.0;
    for (double beta : kBetas) {
        const double cap = kernel_Vdot_sup_bound(beta, T);
        for (double lambda : kLambdas)
            for (int i = 0; i <= 50; ++i)
                CHECK(std::abs(kernel_Vdot({beta, lambda}, T * i / 50.0)) <= cap * (1.0 + 1e-12));
    }
}

TEST_CASE("noise cholesky: clamps roundoff, rejects real indefiniteness") {
    Eigen::Matrix2d q;
    q << 1.0, 0.5, 0.5, 0.25 - 1e-16; // determinant barely negative
    const Eigen::Matrix2d l = noise_cholesky(q);
    CHECK((l * l.transpose() - q).cwiseAbs().maxCoeff() < 1e-12);
    q << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(noise_cholesky(q), numerical_error);
}
