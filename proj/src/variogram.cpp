#include "fractalwave/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fractalwave {

namespace {

void check_modes(int modes, int available, const char* where) {
    if (modes < 1 || modes > available)
        throw validation_error(std::string(where) + ": mode count " + std::to_string(modes) +
                               " outside 1.." + std::to_string(available));
}

template <class RowFn>
void fill_rows(std::vector<VariogramRow>& rows, const RowFn& fn, Parallelism par) {
    const int n = static_cast<int>(rows.size());
    if (par == Parallelism::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) rows[i].value = fn(i);
    } else {
        for (int i = 0; i < n; ++i) rows[i].value = fn(i);
    }
}

} // namespace

VariogramTable spatial_variogram_exact(const Spectrum& spectrum, double beta, double t,
                                       std::span<const std::pair<int, int>> pairs, int modes,
                                       std::span<const double> separations, Parallelism par) {
    if (pairs.empty()) throw validation_error("spatial_variogram_exact: empty pair list");
    if (t < 0.0) throw validation_error("spatial_variogram_exact: t must be >= 0");
    if (separations.size() != pairs.size())
        throw validation_error("spatial_variogram_exact: need one separation per pair");
    check_modes(modes, spectrum.modes(), "spatial_variogram_exact");

    // per-mode time factors shared across pairs
    std::vector<double> time_factor(modes);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < modes; ++k)
        time_factor[k] = integral_V2({beta, std::max(spectrum.lambda[k], 0.0)}, t);

    VariogramTable table;
    table.kind = "spatial";
    table.beta = beta;
    table.base_time = t;
    table.modes = modes;
    table.rows.resize(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) table.rows[i].separation = separations[i];

    fill_rows(table.rows, [&](int i) {
        const auto [x, y] = pairs[i];
        double sum = 0.0;
        for (int k = 0; k < modes; ++k) {
            const double dphi = spectrum.value_at(x, k) - spectrum.value_at(y, k);
            sum += time_factor[k] * dphi * dphi;
        }
        return sum;
    }, par);
    return table;
}

VariogramTable temporal_variogram_exact(const Spectrum& spectrum, double beta, int site,
                                        double s, std::span<const double> lags, int modes,
                                        Parallelism par) {
    if (lags.empty()) throw validation_error("temporal_variogram_exact: empty lag list");
    if (s < 0.0) throw validation_error("temporal_variogram_exact: s must be >= 0");
    for (double lag : lags)
        if (!(lag > 0.0)) throw validation_error("temporal_variogram_exact: lags must be > 0");
    check_modes(modes, spectrum.modes(), "temporal_variogram_exact");
    if (site < 0 || site >= spectrum.complex_vertex_count)
        throw validation_error("temporal_variogram_exact: unknown vertex id");

    std::vector<double> weight(modes);
    for (int k = 0; k < modes; ++k) {
        const double phi = spectrum.value_at(site, k);
        weight[k] = phi * phi;
    }

    VariogramTable table;
    table.kind = "temporal";
    table.beta = beta;
    table.base_time = s;
    table.modes = modes;
    table.rows.resize(lags.size());
    for (size_t i = 0; i < lags.size(); ++i) table.rows[i].separation = lags[i];

    fill_rows(table.rows, [&](int i) {
        double sum = 0.0;
        for (int k = 0; k < modes; ++k)
            sum += weight[k] *
                   increment_variance({beta, std::max(spectrum.lambda[k], 0.0)}, s, lags[i]);
        return sum;
    }, par);
    return table;
}

VariogramTable l2_modulus_exact(std::span<const double> lambdas, double beta, double s,
                                std::span<const double> lags, int modes, Parallelism par) {
    if (lags.empty()) throw validation_error("l2_modulus_exact: empty lag list");
    if (s < 0.0) throw validation_error("l2_modulus_exact: s must be >= 0");
    for (double lag : lags)
        if (!(lag > 0.0)) throw validation_error("l2_modulus_exact: lags must be > 0");
    check_modes(modes, static_cast<int>(lambdas.size()), "l2_modulus_exact");

    VariogramTable table;
    table.kind = "l2";
    table.beta = beta;
    table.base_time = s;
    table.modes = modes;
    table.rows.resize(lags.size());
    for (size_t i = 0; i < lags.size(); ++i) table.rows[i].separation = lags[i];

    fill_rows(table.rows, [&](int i) {
        double sum = 0.0;
        for (int k = 0; k < modes; ++k)
            sum += increment_variance({beta, std::max(lambdas[k], 0.0)}, s, lags[i]);
        return sum;
    }, par);
    return table;
}

VariogramTable empirical_variogram(std::span<const double> separations,
                                   const std::vector<std::vector<double>>& increments) {
    if (separations.size() != increments.size())
        throw validation_error("empirical_variogram: need one increment sample set per separation");
    if (separations.empty()) throw validation_error("empirical_variogram: empty input");

    VariogramTable table;
    table.kind = "empirical";
    table.rows.resize(separations.size());
    for (size_t j = 0; j < separations.size(); ++j) {
        const std::vector<double>& samples = increments[j];
        const size_t n = samples.size();
        if (n < 2)
            throw validation_error(
                "empirical_variogram: need at least 2 replicas for standard errors");
        double mean = 0.0;
        for (double d : samples) mean += d * d;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double d : samples) var += (d * d - mean) * (d * d - mean);
        var /= static_cast<double>(n - 1);
        table.rows[j] = {separations[j], mean, std::sqrt(var / static_cast<double>(n))};
    }
    return table;
}

ExponentFit fit_exponent(const VariogramTable& table, double window_lo, double window_hi) {
    std::vector<std::pair<double, double>> pts;
    for (const VariogramRow& row : table.rows)
        if (row.separation >= window_lo && row.separation <= window_hi && row.separation > 0.0 &&
            row.value > 0.0)
            pts.emplace_back(std::log(row.separation), std::log(row.value));
    if (pts.size() < 3)
        throw validation_error("fit_exponent: fewer than 3 usable rows in the fit window");

    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0) throw validation_error("fit_exponent: degenerate window (one separation)");

    ExponentFit fit;
    fit.points = static_cast<int>(pts.size());
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double rss = std::max(syy - fit.slope * sxy, 0.0);
    if (pts.size() > 2) {
        const double se = std::sqrt(rss / (n - 2.0) / sxx);
        fit.half_width95 = 1.96 * se;
    }
    return fit;
}

double resolution_separation(double lambda_top) {
    if (!(lambda_top > 0.0)) throw validation_error("resolution_separation: lambda must be > 0");
    return 2.0 * std::numbers::pi / std::sqrt(lambda_top);
}

int clean_mode_cap(std::span<const double> lambdas, double frac) {
    if (lambdas.empty()) throw validation_error("clean_mode_cap: empty spectrum");
    if (!(frac > 0.0 && frac <= 1.0)) throw validation_error("clean_mode_cap: frac in (0,1]");
    const double cut = frac * lambdas.back();
    int count = 0;
    for (double lam : lambdas)
        if (lam <= cut) ++count;
    return std::max(count, 1);
}

} // namespace fractalwave
