#include "fractalwave/equilibrium.hpp"

#include <cmath>
#include <string>

#include "fractalwave/errors.hpp"
#include "fractalwave/wave_kernel.hpp"

namespace fractalwave {

namespace {

// zero-mode detection threshold, scale-aware
bool is_zero_mode(double lambda, double top) {
    return lambda <= 1e-9 * std::max(1.0, top);
}

} // namespace

StationaryNorm stationary_norm(std::span<const double> lambdas, double beta, bool neumann) {
    if (!(beta > 0.0))
        throw validation_error("stationary_norm: beta = 0 has no weak limit; requires beta > 0");
    if (lambdas.empty()) throw validation_error("stationary_norm: empty spectrum");

    StationaryNorm out;
    const double top = lambdas.back();
    size_t start = 0;
    if (neumann) {
        while (start < lambdas.size() && is_zero_mode(lambdas[start], top)) ++start;
        out.skipped_zero_modes = static_cast<int>(start);
        if (out.skipped_zero_modes != 1)
            throw structural_error("stationary_norm: Neumann spectrum should carry exactly one "
                                   "zero mode, found " + std::to_string(out.skipped_zero_modes));
        out.zero_mode_rate = neumann_zero_mode_rate(beta);
    }
    for (size_t k = start; k < lambdas.size(); ++k) {
        if (is_zero_mode(lambdas[k], top))
            throw structural_error("stationary_norm: zero eigenvalue in a non-Neumann spectrum");
        out.per_mode.push_back(stationary_variance({beta, lambdas[k]}));
        out.total += out.per_mode.back();
    }

    // Weyl-extrapolated remainder, reported as a diagnostic only. Fit the
    // counting law on the middle of the computed band.
    const size_t n = lambdas.size();
    const size_t lo = std::max<size_t>(start + 1, n / 4);
    const size_t hi = static_cast<size_t>(std::floor(0.8 * static_cast<double>(n)));
    if (hi > lo + 8) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (size_t k = lo; k < hi; ++k) {
            if (lambdas[k] <= 0.0) continue;
            const double x = std::log(static_cast<double>(k + 1));
            const double y = std::log(lambdas[k]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
        if (m >= 8) {
            const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            const double c = std::exp((sy - slope * sx) / m);
            if (slope > 1.05) {
                // sum_{k>n} 1/(4 beta c k^slope) ~ n^{1-slope} / (4 beta c (slope-1))
                out.weyl_tail = std::pow(static_cast<double>(n), 1.0 - slope) /
                                (4.0 * beta * c * (slope - 1.0));
                out.weyl_tail_valid = true;
            }
        }
    }
    return out;
}

EquilibriumGapReport equilibrium_gap(std::span<const double> lambdas, double beta,
                                     std::span<const double> times) {
    if (!(beta > 0.0)) throw validation_error("equilibrium_gap: requires beta > 0");
    if (lambdas.empty()) throw validation_error("equilibrium_gap: empty spectrum");
    for (double lam : lambdas)
        if (!(lam > 0.0))
            throw validation_error("equilibrium_gap: all eigenvalues must be positive "
                                   "(exclude the Neumann zero mode first)");

    EquilibriumGapReport report;
    report.times.assign(times.begin(), times.end());
    const double b2 = beta * beta;
    double underdamped_sum = 0.0;
    for (double lam : lambdas)
        if (lam > b2) underdamped_sum += 1.0 / (lam - b2);

    for (double t : times) {
        if (t < 0.0) throw validation_error("equilibrium_gap: times must be >= 0");
        std::vector<double> gaps(lambdas.size());
        double total = 0.0, finite_part = 0.0;
        for (size_t k = 0; k < lambdas.size(); ++k) {
            const WaveParams p{beta, lambdas[k]};
            gaps[k] = stationary_variance(p) - integral_V2(p, t);
            total += gaps[k];
            if (lambdas[k] <= b2) finite_part += gaps[k];
        }
        report.per_mode_gap.push_back(std::move(gaps));
        report.total_gap.push_back(total);
        report.bound.push_back(finite_part +
                               std::exp(-2.0 * beta * t) / (2.0 * beta) * underdamped_sum);
    }
    return report;
}

std::vector<double> undamped_growth(double lambda, std::span<const double> times) {
    if (!(lambda > 0.0)) throw validation_error("undamped_growth: lambda must be > 0");
    std::vector<double> out;
    out.reserve(times.size());
    double previous = -1.0;
    for (double t : times) {
        if (t <= previous) throw validation_error("undamped_growth: times must be increasing");
        previous = t;
        const double root = std::sqrt(lambda);
        out.push_back(t / (2.0 * lambda) - std::sin(2.0 * root * t) / (4.0 * lambda * root));
    }
    return out;
}

double neumann_zero_mode_rate(double beta) {
    if (!(beta > 0.0)) throw validation_error("neumann_zero_mode_rate: requires beta > 0");
    return 1.0 / (4.0 * beta * beta);
}

} // namespace fractalwave
