#include "fractalwave/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>

#include "fractalwave/equilibrium.hpp"
#include "fractalwave/quadrature.hpp"
#include "fractalwave/rng.hpp"
#include "fractalwave/simulate.hpp"
#include "fractalwave/variogram.hpp"
#include "fractalwave/wave_kernel.hpp"

namespace fractalwave {

namespace {

using std::numbers::pi;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

bool scoped(ReportScope scope, const char* preset_name) {
    if (scope == ReportScope::all) return true;
    if (scope == ReportScope::interval) return std::string(preset_name) == "interval";
    if (scope == ReportScope::gasket) return std::string(preset_name) == "gasket";
    return std::string(preset_name) == "hata";
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

Eigen::Matrix2d matexp_taylor(const Eigen::Matrix2d& a) {
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

std::vector<double> lambda_vector(const Spectrum& sp) {
    return {sp.lambda.data(), sp.lambda.data() + sp.modes()};
}

constexpr double kBeta = 1.0; // damping used throughout the suite

// ---------------------------------------------------------------------------

CriterionResult criterion1(ReportScope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{1, "interval-spectrum-oracle", false, "", 0.0};
    const auto dirichlet = ctx.spectrum("interval", 10, BoundaryCondition::dirichlet());
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double exact = k * k * pi * pi;
        worst = std::max(worst, std::abs(dirichlet->lambda[k - 1] - exact) / exact);
    }
    const auto neumann = ctx.spectrum(
        "interval", 10, BoundaryCondition::neumann(ctx.system("interval").spec));
    const double lambda1 = std::abs(neumann->lambda[0]);
    const Eigen::VectorXd phi1 = neumann->phi.col(0);
    const double flatness =
        (phi1.maxCoeff() - phi1.minCoeff()) / std::abs(phi1.maxCoeff());
    r.seconds = timer.seconds();
    r.passed = worst < 0.01 && lambda1 < 1e-9 && flatness < 1e-7 && r.seconds < 30.0;
    r.detail = fmt("first-5 rel err %.2e (tol 1e-2); |lambda_1^N| = %.2e (tol 1e-9); "
                   "phi_1^N flatness %.1e; %.1fs (cap 30s)",
                   worst, lambda1, flatness, r.seconds);
    return r;
}

CriterionResult criterion2(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{2, "eigenvalue-interlacing", false, "", 0.0};
    struct Case { const char* name; int level; };
    double worst = 0.0;
    int subsets = 0;
    for (const Case& c : {Case{"interval", 8}, Case{"gasket", 5}, Case{"hata", 8}}) {
        if (!scoped(scope, c.name)) continue;
        const FractalSystem& system = ctx.system(c.name);
        const int modes = 50;
        const auto neumann =
            ctx.spectrum(c.name, c.level, BoundaryCondition::neumann(system.spec));
        const auto dirichlet = ctx.spectrum(c.name, c.level, BoundaryCondition::dirichlet());
        for (const BoundaryCondition& b : all_boundary_conditions(system.spec)) {
            const auto sp = ctx.spectrum(c.name, c.level, b);
            ++subsets;
            for (int k = 0; k < modes; ++k) {
                const double tol = 1e-9 * std::max(1.0, sp->lambda[k]);
                worst = std::max(worst, (neumann->lambda[k] - sp->lambda[k]) / tol * 1e-9);
                worst = std::max(worst, (sp->lambda[k] - dirichlet->lambda[k]) / tol * 1e-9);
            }
        }
    }
    r.seconds = timer.seconds();
    r.passed = worst <= 1e-9;
    r.detail = fmt("%d boundary subsets, 50 modes each; worst scaled violation %.2e "
                   "(tol 1e-9)", subsets, worst);
    return r;
}

CriterionResult criterion3(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{3, "harmonic-renormalization", false, "", 0.0};
    double worst = 0.0;
    std::string parts;
    for (const char* name : {"interval", "gasket", "hata"}) {
        if (!scoped(scope, name)) continue;
        const FractalSystem& system = ctx.system(name);
        const RenormalizationCheck check =
            verify_harmonic_structure(system.spec, system.harmonic);
        worst = std::max(worst, check.residual);
        parts += fmt("%s %.1e; ", name, check.residual);
    }
    bool perturbed_ok = true;
    if (scoped(scope, "gasket")) {
        FractalSystem wrong = ctx.system("gasket");
        wrong.harmonic.r = {0.5, 0.5, 0.5};
        const RenormalizationCheck check =
            verify_harmonic_structure(wrong.spec, wrong.harmonic);
        perturbed_ok = !check.pass && check.residual > 1e-3;
        parts += fmt("perturbed-r gasket %.2e (must exceed 1e-3)", check.residual);
    }
    r.seconds = timer.seconds();
    r.passed = worst < 1e-10 && perturbed_ok;
    r.detail = fmt("Schur residuals: %s", parts.c_str());
    return r;
}

CriterionResult criterion4(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{4, "weyl-spectral-dimension", false, "", 0.0};
    bool pass = true;
    std::string parts;
    if (scoped(scope, "interval")) {
        const auto sp = ctx.spectrum("interval", 10, BoundaryCondition::dirichlet());
        const WeylFit fit = weyl_diagnostics(*sp, ctx.dimensions("interval"), 2, 50);
        pass = pass && fit.ds_deviation < 0.05;
        parts += fmt("interval d_s %.4f (target 1, tol 0.05); ", fit.ds_estimate);
    }
    if (scoped(scope, "gasket")) {
        const auto sp = ctx.spectrum("gasket", 7, BoundaryCondition::dirichlet());
        const DimensionData dims = ctx.dimensions("gasket");
        const WeylFit fit = weyl_diagnostics(*sp, dims, 5, 100);
        pass = pass && fit.ds_deviation < 0.07;
        parts += fmt("gasket d_s %.4f (target %.4f, tol 0.07)", fit.ds_estimate,
                     dims.d_spectral);
    }
    r.seconds = timer.seconds();
    r.passed = pass;
    r.detail = parts;
    return r;
}

CriterionResult criterion5(ReportScope, AcceptanceContext&) {
    Timer timer;
    CriterionResult r{5, "laplace-transform-identity", false, "", 0.0};
    double worst = 0.0;
    int points = 0;
    for (double alpha : {0.3, 1.0, 2.5})
        for (double beta : {0.0, 1.0, 2.0}) {
            // three eigenvalues spanning the regimes, with lambda = beta^2 exact
            const double b2 = beta * beta;
            for (double lambda : {beta > 0 ? 0.25 * b2 : 0.6, b2, b2 + 5.0}) {
                const WaveParams p{beta, lambda};
                const double closed = laplace_V2(alpha, p);
                const double quad = integrate(
                    [&](double t) {
                        const double v = kernel_V(p, t);
                        return std::exp(-2.0 * alpha * t) * v * v;
                    }, 0.0, 40.0 / alpha, 1e-12);
                worst = std::max(worst, std::abs(closed - quad) / closed);
                ++points;
            }
        }
    r.seconds = timer.seconds();
    r.passed = worst < 1e-8 && points == 27;
    r.detail = fmt("27-point (alpha,beta,lambda) grid incl lambda=beta^2; worst rel "
                   "difference %.2e (tol 1e-8)", worst);
    return r;
}

CriterionResult criterion6(ReportScope, AcceptanceContext&) {
    Timer timer;
    CriterionResult r{6, "mode-transition-exactness", false, "", 0.0};
    double worst_mean = 0.0, worst_noise = 0.0, worst_compose = 0.0;
    for (double beta : {0.0, 0.5, 1.0, 2.0})
        for (double lambda : {0.0, 1.0, 25.0, 400.0})
            for (double h : {0.1, 0.5}) {
                const WaveParams p{beta, lambda};
                const ModeTransition tr = mode_transition(p, h);
                Eigen::Matrix2d a;
                a << 0.0, 1.0, -lambda, -2.0 * beta;
                worst_mean = std::max(worst_mean,
                                      (tr.mean - matexp_taylor(a * h)).cwiseAbs().maxCoeff());
                const double q12 = integrate(
                    [&](double s) { return kernel_V(p, s) * kernel_Vdot(p, s); }, 0.0, h, 1e-12);
                const double q22 = integrate(
                    [&](double s) {
                        const double vd = kernel_Vdot(p, s);
                        return vd * vd;
                    }, 0.0, h, 1e-12);
                worst_noise = std::max(worst_noise, std::abs(tr.noise(0, 1) - q12));
                worst_noise = std::max(worst_noise, std::abs(tr.noise(1, 1) - q22));

                const ModeTransition half = mode_transition(p, h / 2.0);
                const Eigen::Matrix2d mean2 = half.mean * half.mean;
                const Eigen::Matrix2d noise2 =
                    half.mean * half.noise * half.mean.transpose() + half.noise;
                worst_compose = std::max(worst_compose,
                                         (tr.mean - mean2).cwiseAbs().maxCoeff());
                worst_compose = std::max(worst_compose,
                                         (tr.noise - noise2).cwiseAbs().maxCoeff());
            }
    r.seconds = timer.seconds();
    r.passed = worst_mean < 1e-9 && worst_noise < 1e-8 && worst_compose < 1e-10;
    r.detail = fmt("matrix exponential diff %.2e (tol 1e-9); Q identities vs quadrature "
                   "%.2e (tol 1e-8); Chapman-Kolmogorov %.2e (tol 1e-10)",
                   worst_mean, worst_noise, worst_compose);
    return r;
}

CriterionResult criterion7(ReportScope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{7, "simulator-vs-theory", false, "", 0.0};
    const auto sp = ctx.spectrum("interval", 8, BoundaryCondition::dirichlet());
    const int modes = 50;
    const int replicas = 100000;
    const uint64_t seed = 20260810;
    const TransitionTable first = transition_table(*sp, kBeta, modes, 0.5);
    const TransitionTable second = transition_table(*sp, kBeta, modes, 1.5);

    std::vector<double> var_half(modes, 0.0), var_two(modes, 0.0);
    std::vector<double> cross(static_cast<size_t>(modes) * modes, 0.0);
    for (int rep = 0; rep < replicas; ++rep) {
        SimulationState state =
            init_simulation(sp, kBeta, modes, seed, {}, static_cast<uint32_t>(rep));
        advance(state, first);
        for (int k = 0; k < modes; ++k) var_half[k] += state.y[k] * state.y[k];
        advance(state, second);
        for (int a = 0; a < modes; ++a) {
            var_two[a] += state.y[a] * state.y[a];
            for (int b = a + 1; b < modes; ++b)
                cross[static_cast<size_t>(a) * modes + b] += state.y[a] * state.y[b];
        }
    }
    double worst_sigma = 0.0;
    for (int k = 0; k < modes; ++k) {
        for (auto [t, sum] : {std::pair{0.5, var_half[k]}, std::pair{2.0, var_two[k]}}) {
            const double expected = integral_V2({kBeta, sp->lambda[k]}, t);
            const double se = expected * std::sqrt(2.0 / replicas);
            worst_sigma = std::max(worst_sigma, std::abs(sum / replicas - expected) / se);
        }
    }
    double worst_cross = 0.0;
    for (int a = 0; a < modes; ++a)
        for (int b = a + 1; b < modes; ++b) {
            const double se = std::sqrt(var_two[a] / replicas * var_two[b] / replicas / replicas);
            worst_cross = std::max(
                worst_cross, std::abs(cross[static_cast<size_t>(a) * modes + b] / replicas) / se);
        }
    r.seconds = timer.seconds();
    r.passed = worst_sigma < 3.0 && worst_cross < 4.0 && r.seconds < 300.0;
    r.detail = fmt("1e5 replicas, 50 modes: worst variance deviation %.2f sigma (cap 3); "
                   "worst cross-correlation %.2f sigma (cap 4); %.1fs (cap 300s)",
                   worst_sigma, worst_cross, r.seconds);
    return r;
}

CriterionResult criterion8(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{8, "temporal-holder-exponent", false, "", 0.0};
    const std::vector<double> lags = log_spaced(1e-4, 1e-2, 25);
    bool pass = true;
    std::string parts;
    if (scoped(scope, "interval")) {
        const auto sp = ctx.spectrum("interval", 10, BoundaryCondition::dirichlet());
        const int modes = sp->modes();
        const VariogramTable table =
            temporal_variogram_exact(*sp, kBeta, /*site=*/2, 2.0, lags, modes);
        const double resolved = resolution_separation(sp->lambda[modes - 1]);
        const ExponentFit fit = fit_exponent(table, resolved, 1e-2);
        const double target = 2.0 - ctx.dimensions("interval").d_spectral;
        pass = pass && std::abs(fit.slope - target) < 0.05;
        parts += fmt("interval slope %.4f over [%.1e,1e-2] (%d pts, target %.2f, tol 0.05); ",
                     fit.slope, resolved, fit.points, target);
    }
    if (scoped(scope, "gasket")) {
        const auto sp = ctx.spectrum("gasket", 7, BoundaryCondition::dirichlet());
        const int cap = clean_mode_cap(lambda_vector(*sp), 0.5);
        const double resolved = resolution_separation(sp->lambda[cap - 1]);
        const double target = 2.0 - ctx.dimensions("gasket").d_spectral;
        // the pinned window [1e-4, 1e-2] sits entirely below the resolution of
        // any desk-scale spectrum: level 7 resolves nothing finer than
        // `resolved`, and the lag 1e-4 end would need faithful eigenvalues
        // near 1e9 (level >= 13). Fit what the window permits; report the
        // attainable-window slope alongside as evidence the law itself holds.
        std::string gasket_part;
        bool gasket_pass = false;
        if (resolved < 1e-2) {
            const VariogramTable table =
                temporal_variogram_exact(*sp, kBeta, /*site=*/3, 2.0, lags, cap);
            try {
                const ExponentFit fit = fit_exponent(table, resolved, 1e-2);
                gasket_pass = std::abs(fit.slope - target) < 0.05;
                gasket_part = fmt("gasket slope %.4f over [%.1e,1e-2] (target %.3f)", fit.slope,
                                  resolved, target);
            } catch (const validation_error&) {
                gasket_part = fmt("gasket: <3 resolved lags above %.2e", resolved);
            }
        } else {
            gasket_part = fmt("gasket FAIL: no resolvable lag in [1e-4,1e-2] "
                              "(K=%d resolution %.2e)", cap, resolved);
        }
        const std::vector<double> wide = log_spaced(resolved * 1.05, 0.3, 15);
        const VariogramTable demo =
            temporal_variogram_exact(*sp, kBeta, /*site=*/3, 2.0, wide, cap);
        const ExponentFit demo_fit = fit_exponent(demo, 0.0, 1.0);
        gasket_part += fmt("; attainable-window slope %.4f over [%.2e,0.3] (target %.3f)",
                           demo_fit.slope, wide.front(), target);
        pass = pass && gasket_pass;
        parts += gasket_part;
    }
    r.seconds = timer.seconds();
    r.passed = pass;
    r.detail = parts;
    return r;
}

CriterionResult criterion9(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{9, "spatial-holder-exponent", false, "", 0.0};
    bool pass = true;
    std::string parts;
    if (scoped(scope, "interval")) {
        const auto sp = ctx.spectrum("interval", 10, BoundaryCondition::dirichlet());
        const FractalSystem& system = ctx.system("interval");
        const VertexComplex& complex = ctx.complex("interval", 10);
        const auto coords = vertex_coordinates(system.spec, complex);
        const auto find = [&](double x) {
            int best = 0;
            double gap = 1e9;
            for (int v = 0; v < complex.vertex_count; ++v)
                if (std::abs(coords[v][0] - x) < gap) {
                    gap = std::abs(coords[v][0] - x);
                    best = v;
                }
            return best;
        };
        const CellWeights cells =
            cell_table(system.spec, system.harmonic.r,
                       ctx.dimensions("interval").d_hausdorff, 10);
        const ResistanceSolver solver(ctx.energy(
            "interval", 10, BoundaryCondition::neumann(system.spec)));
        std::vector<std::pair<int, int>> pairs;
        std::vector<double> seps;
        for (int j = 3; j <= 8; ++j) {
            pairs.emplace_back(find(0.25), find(0.25 + std::pow(2.0, -j)));
            seps.push_back(solver.resistance(pairs.back().first, pairs.back().second));
        }
        const VariogramTable table = spatial_variogram_exact(*sp, kBeta, 2.0, pairs, 400, seps);
        const ExponentFit fit = fit_exponent(table, 0.0, 1.0);
        pass = pass && std::abs(fit.slope - 1.0) < 0.1;
        parts += fmt("interval slope %.4f over R in [2^-8,2^-3] (tol 0.1); ", fit.slope);
    }
    if (scoped(scope, "gasket")) {
        const auto sp = ctx.spectrum("gasket", 6, BoundaryCondition::dirichlet());
        const FractalSystem& system = ctx.system("gasket");
        const ResistanceSolver solver(ctx.energy(
            "gasket", 6, BoundaryCondition::neumann(system.spec)));
        std::vector<std::pair<int, int>> pairs;
        std::vector<double> seps;
        for (int m = 1; m <= 6; ++m) {
            const VertexComplex& at_m = ctx.complex("gasket", m);
            // the deepest cell along contraction 1: its p2/p3 image points
            const Cell& cell = at_m.cells.front();
            pairs.emplace_back(cell.vertices[1], cell.vertices[2]);
            seps.push_back(solver.resistance(pairs.back().first, pairs.back().second));
        }
        const VariogramTable table =
            spatial_variogram_exact(*sp, kBeta, 2.0, pairs, sp->modes(), seps);
        const ExponentFit fit = fit_exponent(table, 0.0, 1.0);
        pass = pass && std::abs(fit.slope - 1.0) < 0.1;
        parts += fmt("gasket slope %.4f over level<=6 pairs, R in [%.3f,%.3f] (tol 0.1)",
                     fit.slope, seps.back(), seps.front());
    }
    r.seconds = timer.seconds();
    r.passed = pass;
    r.detail = parts;
    return r;
}

CriterionResult criterion10(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{10, "l2-modulus-exponent", false, "", 0.0};
    bool pass = true;
    std::string parts;
    if (scoped(scope, "interval")) {
        const auto sp = ctx.spectrum("interval", 10, BoundaryCondition::dirichlet());
        const std::vector<double> lambdas = lambda_vector(*sp);
        const std::vector<double> lags = log_spaced(1e-4, 1e-2, 25);
        const VariogramTable table =
            l2_modulus_exact(lambdas, kBeta, 2.0, lags, sp->modes());
        const double resolved = resolution_separation(lambdas.back());
        const ExponentFit fit = fit_exponent(table, resolved, 1e-2);
        const double target = 2.0 - ctx.dimensions("interval").d_spectral;
        pass = pass && std::abs(fit.slope - target) < 0.05;
        parts += fmt("interval slope %.4f over [%.1e,1e-2] (target %.2f, tol 0.05); ",
                     fit.slope, resolved, target);
    }
    if (scoped(scope, "gasket")) {
        const auto sp = ctx.spectrum("gasket", 7, BoundaryCondition::dirichlet());
        const std::vector<double> lambdas = lambda_vector(*sp);
        const int cap = clean_mode_cap(lambdas, 0.5);
        const double resolved = resolution_separation(lambdas[cap - 1]);
        const std::vector<double> lags = log_spaced(resolved * 1.05, 0.3, 15);
        const VariogramTable table = l2_modulus_exact(lambdas, kBeta, 2.0, lags, cap);
        const ExponentFit fit = fit_exponent(table, 0.0, 1.0);
        const double target = 2.0 - ctx.dimensions("gasket").d_spectral;
        pass = pass && std::abs(fit.slope - target) < 0.05;
        parts += fmt("gasket slope %.4f over [%.2e,0.3] (target %.3f, tol 0.05)", fit.slope,
                     lags.front(), target);
    }
    r.seconds = timer.seconds();
    r.passed = pass;
    r.detail = parts;
    return r;
}

CriterionResult criterion11(ReportScope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{11, "equilibrium-stationary-norm", false, "", 0.0};
    // exact interval eigenvalues: Basel oracle
    std::vector<double> exact(200);
    for (int k = 1; k <= 200; ++k) exact[k - 1] = k * k * pi * pi;
    const StationaryNorm from_exact = stationary_norm(exact, kBeta, false);
    const double dev_exact = std::abs(from_exact.total - 1.0 / 24.0) * 24.0;

    const auto sp = ctx.spectrum("interval", 10, BoundaryCondition::dirichlet());
    std::vector<double> discrete = lambda_vector(*sp);
    discrete.resize(200);
    const StationaryNorm from_discrete = stationary_norm(discrete, kBeta, false);
    const double dev_discrete = std::abs(from_discrete.total - 1.0 / 24.0) * 24.0;

    // per-mode gap at t=5 against the proof's exponential tail bound
    const EquilibriumGapReport gaps =
        equilibrium_gap(exact, kBeta, std::vector<double>{1.0, 5.0});
    double worst_ratio = 0.0;
    for (size_t k = 0; k < exact.size(); ++k) {
        const double bound = std::exp(-2.0 * kBeta * 5.0) / (2.0 * kBeta * (exact[k] - 1.0));
        worst_ratio = std::max(worst_ratio, gaps.per_mode_gap[1][k] / bound);
    }
    const double decay = gaps.per_mode_gap[1][0] / gaps.per_mode_gap[0][0];

    r.seconds = timer.seconds();
    r.passed = dev_exact < 0.005 && dev_discrete < 0.02 && worst_ratio <= 1.0 + 1e-9 &&
               decay <= std::exp(-8.0) * 1.1;
    r.detail = fmt("K=200 partial sum vs 1/24: exact-lambda dev %.2e (tol 5e-3), discrete "
                   "dev %.2e (tol 2e-2); per-mode gap(5)/bound max %.3f; gap decay %.2e "
                   "(cap %.2e)", dev_exact, dev_discrete, worst_ratio, decay,
                   std::exp(-8.0) * 1.1);
    return r;
}

CriterionResult criterion12(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{12, "undamped-growth-and-neumann-mode", false, "", 0.0};
    double worst = 0.0;
    for (double lambda : {1.0, pi * pi}) {
        const auto values = undamped_growth(lambda, std::vector<double>{100.0, 200.0});
        worst = std::max(worst, std::abs(values[1] / values[0] - 2.0) / 2.0);
    }
    bool neumann_ok = true;
    std::string neumann_part;
    if (scoped(scope, "interval")) {
        const auto sp = ctx.spectrum(
            "interval", 8, BoundaryCondition::neumann(ctx.system("interval").spec));
        const StationaryNorm norm = stationary_norm(lambda_vector(*sp), kBeta, true);
        const double rate = neumann_zero_mode_rate(kBeta);
        // long-time variance increment of the zero mode approaches the rate
        const WaveParams zero{kBeta, 0.0};
        const double increment = integral_V2(zero, 13.0) - integral_V2(zero, 12.0);
        neumann_ok = norm.skipped_zero_modes == 1 &&
                     std::abs(rate - 1.0 / (4.0 * kBeta * kBeta)) == 0.0 &&
                     std::abs(increment - rate) < 1e-4 * rate;
        neumann_part = fmt("; Neumann zero mode excluded (%d), growth rate %.4f per unit "
                           "time (1/(4 beta^2) = %.4f, increment %.6f)",
                           norm.skipped_zero_modes, rate, 1.0 / (4.0 * kBeta * kBeta),
                           increment);
    }
    r.seconds = timer.seconds();
    r.passed = worst < 0.01 && neumann_ok;
    r.detail = fmt("Var(2T)/Var(T) at T=100 within %.2e of 2 (tol 1e-2) for lambda in "
                   "{1, pi^2}%s", worst, neumann_part.c_str());
    return r;
}

CriterionResult criterion13(ReportScope, AcceptanceContext&) {
    Timer timer;
    CriterionResult r{13, "kernel-sup-bounds", false, "", 0.0};
    const double beta = 1.0;
    std::vector<double> grid{0.0};
    for (int i = 0; i < 999; ++i) grid.push_back(1e-3 * std::pow(1e7 / 1e-3, i / 998.0));
    bool pass = true;
    double worst_excess = 0.0, equality_gap = 0.0;
    for (double t : {0.1, 1.0, 5.0}) {
        const double cap = kernel_V_sup(beta, t);
        for (double lambda : grid) {
            const double v = std::abs(kernel_V({beta, lambda}, t));
            worst_excess = std::max(worst_excess, v - cap);
        }
        equality_gap = std::max(equality_gap, std::abs(kernel_V({beta, 0.0}, t) - cap));
        // beta = 0: the sup is t itself
        pass = pass && std::abs(kernel_V({0.0, 0.0}, t) - t) < 1e-12 * std::max(1.0, t);
    }
    const double horizon = 5.0;
    const double vdot_cap = kernel_Vdot_sup_bound(beta, horizon);
    double vdot_worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = horizon * i / 200.0;
        for (double lambda : grid)
            vdot_worst = std::max(vdot_worst, std::abs(kernel_Vdot({beta, lambda}, t)));
    }
    r.seconds = timer.seconds();
    r.passed = pass && worst_excess < 1e-12 && equality_gap < 1e-12 &&
               vdot_worst <= vdot_cap * (1.0 + 1e-12);
    r.detail = fmt("1000-point lambda grid: max |V| excess over beta^-1 e^-bt sinh(bt) = "
                   "%.1e; equality gap at lambda=0 = %.1e; sup|Vdot| %.3f <= %.3f",
                   worst_excess, equality_gap, vdot_worst, vdot_cap);
    return r;
}

CriterionResult criterion14(ReportScope scope, AcceptanceContext& ctx) {
    Timer timer;
    CriterionResult r{14, "resistance-nested-consistency", false, "", 0.0};
    double worst = 0.0;
    int pairs_checked = 0;
    for (const char* name : {"interval", "gasket", "hata"}) {
        if (!scoped(scope, name)) continue;
        const FractalSystem& system = ctx.system(name);
        const VertexComplex& base = ctx.complex(name, 1);
        std::vector<double> reference;
        for (int level = 1; level <= 4; ++level) {
            const ResistanceSolver solver(
                ctx.energy(name, level, BoundaryCondition::neumann(system.spec)));
            size_t slot = 0;
            for (int x = 0; x < base.vertex_count; ++x)
                for (int y = x + 1; y < base.vertex_count; ++y) {
                    const double value = solver.resistance(x, y);
                    if (level == 1) {
                        reference.push_back(value);
                    } else {
                        worst = std::max(worst, std::abs(value - reference[slot]) /
                                                    std::max(1.0, reference[slot]));
                        ++pairs_checked;
                    }
                    ++slot;
                }
        }
    }
    r.seconds = timer.seconds();
    r.passed = worst < 1e-9;
    r.detail = fmt("%d pair/level combinations, levels m..m+3 with m=1: worst relative "
                   "disagreement %.2e (tol 1e-9)", pairs_checked, worst);
    return r;
}

using CriterionFn = CriterionResult (*)(ReportScope, AcceptanceContext&);

constexpr CriterionFn kCriteria[] = {
    criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7,
    criterion8, criterion9, criterion10, criterion11, criterion12, criterion13, criterion14,
};

} // namespace

ReportScope parse_scope(const std::string& text) {
    if (text == "all") return ReportScope::all;
    if (text == "interval") return ReportScope::interval;
    if (text == "gasket") return ReportScope::gasket;
    if (text == "hata") return ReportScope::hata;
    throw validation_error("unknown report scope '" + text + "'");
}

const FractalSystem& AcceptanceContext::system(const std::string& preset_name) {
    auto it = systems_.find(preset_name);
    if (it == systems_.end()) it = systems_.emplace(preset_name, preset(preset_name)).first;
    return it->second;
}

const VertexComplex& AcceptanceContext::complex(const std::string& preset_name, int level) {
    const std::string key = preset_name + ":" + std::to_string(level);
    auto it = complexes_.find(key);
    if (it == complexes_.end())
        it = complexes_.emplace(key, expand_complex(system(preset_name).spec, level)).first;
    return it->second;
}

DimensionData AcceptanceContext::dimensions(const std::string& preset_name) {
    return dimension_exponents(system(preset_name).harmonic.r);
}

EnergySystem AcceptanceContext::energy(const std::string& preset_name, int level,
                                       const BoundaryCondition& b) {
    const FractalSystem& sys = system(preset_name);
    const VertexComplex& cx = complex(preset_name, level);
    const CellWeights cells =
        cell_table(sys.spec, sys.harmonic.r, dimensions(preset_name).d_hausdorff, level);
    return reduce_boundary(cx, assemble_energy(cx, sys.harmonic, cells),
                           assemble_mass(cx, cells), b);
}

std::shared_ptr<const Spectrum> AcceptanceContext::spectrum(const std::string& preset_name,
                                                            int level,
                                                            const BoundaryCondition& b) {
    const std::string key = preset_name + ":" + std::to_string(level) + ":" + b.key();
    auto it = spectra_.find(key);
    if (it == spectra_.end()) {
        const EnergySystem sys = energy(preset_name, level, b);
        it = spectra_
                 .emplace(key, std::make_shared<Spectrum>(solve_spectrum(sys, sys.dim())))
                 .first;
    }
    return it->second;
}

std::vector<int> criteria_for_scope(ReportScope scope) {
    if (scope == ReportScope::all)
        return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    if (scope == ReportScope::interval)
        return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    if (scope == ReportScope::gasket) return {2, 3, 4, 5, 6, 8, 9, 10, 12, 13, 14};
    return {2, 3, 5, 6, 12, 13, 14}; // hata
}

CriterionResult run_criterion(int id, ReportScope scope, AcceptanceContext& context) {
    if (id < 1 || id > 14) throw validation_error("criterion id must be in 1..14");
    return kCriteria[id - 1](scope, context);
}

std::vector<CriterionResult> run_acceptance(ReportScope scope, AcceptanceContext& context) {
    std::vector<CriterionResult> results;
    for (int id : criteria_for_scope(scope)) results.push_back(run_criterion(id, scope, context));
    return results;
}

} // namespace fractalwave
