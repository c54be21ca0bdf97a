#pragma once

#include <span>
#include <vector>

namespace fractalwave {

/// Stationary variance ledger for beta > 0: per-mode 1/(4 beta lambda_k) and
/// the total over admissible modes. With Neumann boundary the zero mode is
/// excluded (its variance grows linearly forever) and its growth rate is
/// reported instead.
struct StationaryNorm {
    double total = 0.0;
    std::vector<double> per_mode; // admissible modes only, in spectral order
    int skipped_zero_modes = 0;
    double zero_mode_rate = 0.0;  // 1/(4 beta^2) per unit time, when skipped
    double weyl_tail = 0.0;       // extrapolated remainder beyond the computed modes
    bool weyl_tail_valid = false;
};

StationaryNorm stationary_norm(std::span<const double> lambdas, double beta, bool neumann);

/// Distance from equilibrium: per-mode gap integral int_t^inf V^2 and the
/// exponential tail bound (1/2 beta) e^{-2 beta t} sum 1/(lambda - beta^2)
/// over underdamped modes, plus the exactly-evaluated overdamped part.
struct EquilibriumGapReport {
    std::vector<double> times;
    std::vector<std::vector<double>> per_mode_gap; // [time][mode]
    std::vector<double> total_gap;                 // per time
    std::vector<double> bound;                     // per time
};

EquilibriumGapReport equilibrium_gap(std::span<const double> lambdas, double beta,
                                     std::span<const double> times);

/// Closed-form Var Y(t) = t/(2 lambda) - sin(2 sqrt(lambda) t)/(4 lambda^{3/2})
/// for the undamped mode: grows without bound.
std::vector<double> undamped_growth(double lambda, std::span<const double> times);

/// Linear growth rate of the Neumann zero mode variance for beta > 0.
double neumann_zero_mode_rate(double beta);

} // namespace fractalwave
