#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fractalwave/simulate.hpp"
#include "fractalwave/spectrum.hpp"

namespace fractalwave {

struct VariogramRow {
    double separation = 0.0; // resistance distance (spatial) or time lag
    double value = 0.0;      // expected squared increment
    double std_error = 0.0;  // 0 for exact tables
};

struct VariogramTable {
    std::string kind; // "spatial" | "temporal" | "l2" | "empirical"
    double beta = 0.0;
    double base_time = 0.0; // t for spatial tables, s for temporal ones
    int modes = 0;
    std::vector<VariogramRow> rows;
};

/// Exact second moment of u(t,x) - u(t,y) for the K-truncated field:
/// sum_k int_0^t V(lambda_k)^2 * (phi_k(x) - phi_k(y))^2.
VariogramTable spatial_variogram_exact(const Spectrum& spectrum, double beta, double t,
                                       std::span<const std::pair<int, int>> pairs, int modes,
                                       std::span<const double> separations,
                                       Parallelism par = Parallelism::openmp);

/// Exact second moment of u(s+lag,x) - u(s,x):
/// sum_k increment_variance(lambda_k; s, lag) * phi_k(x)^2.
VariogramTable temporal_variogram_exact(const Spectrum& spectrum, double beta, int site,
                                        double s, std::span<const double> lags, int modes,
                                        Parallelism par = Parallelism::openmp);

/// Exact L2(mu) modulus: mass-orthonormality reduces the field increment to
/// the bare sum of per-mode increment variances.
VariogramTable l2_modulus_exact(std::span<const double> lambdas, double beta, double s,
                                std::span<const double> lags, int modes,
                                Parallelism par = Parallelism::openmp);

/// Monte-Carlo counterpart: mean of squared increments across replicas with
/// standard errors. increments[j] holds the per-replica increments at
/// separations[j]; at least two replicas are required.
VariogramTable empirical_variogram(std::span<const double> separations,
                                   const std::vector<std::vector<double>>& increments);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double half_width95 = 0.0; // 95% half-width of the slope
    int points = 0;
    double window_lo = 0.0, window_hi = 0.0;
};

/// OLS of log value against log separation over rows inside the window.
ExponentFit fit_exponent(const VariogramTable& table, double window_lo, double window_hi);

/// Smallest lag the K-mode truncation resolves: one full period of the top
/// retained mode, 2 pi / sqrt(lambda_K). Below it the exact tables bend to
/// the lag^2 regime regardless of the underlying field.
double resolution_separation(double lambda_top);

/// Largest K whose eigenvalue stays below frac * lambda_max; keeps the
/// discretization-corrupted top of the computed band out of mode sums.
int clean_mode_cap(std::span<const double> lambdas, double frac = 0.5);

} // namespace fractalwave
