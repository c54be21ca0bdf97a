#include "fractalwave/spectrum.hpp"

#include <cmath>
#include <string>

#include <lapacke.h>

namespace fractalwave {

Spectrum solve_spectrum(const EnergySystem& system, int modes) {
    const int n = system.dim();
    if (modes < 1 || modes > n)
        throw validation_error("solve_spectrum: mode count " + std::to_string(modes) +
                               " outside 1.." + std::to_string(n));
    if (n > 6000)
        throw validation_error("solve_spectrum: dense solve capped at 6000 vertices; "
                               "use a coarser level");
    if ((system.mass.array() <= 0.0).any())
        throw structural_error("solve_spectrum: mass vector must be strictly positive");

    // Symmetric reduction of the generalized problem: the lumped mass matrix
    // is diagonal, so A = M^{-1/2} (-H) M^{-1/2} is an ordinary symmetric
    // eigenproblem and phi = M^{-1/2} v stays mass-orthonormal.
    const Eigen::VectorXd inv_sqrt_m = system.mass.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int col = 0; col < system.h.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(system.h, col); it; ++it)
            a(it.row(), col) = -it.value() * inv_sqrt_m(it.row()) * inv_sqrt_m(col);

    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0)
        throw numerical_error("solve_spectrum: dsyevd failed with info " + std::to_string(info));

    Spectrum out;
    out.b = system.b;
    out.level = system.level;
    out.complex_vertex_count = static_cast<int>(system.index_of.size());
    out.kept = system.kept;
    out.index_of = system.index_of;
    out.lambda = w.head(modes);
    out.phi.resize(n, modes);
    for (int k = 0; k < modes; ++k) out.phi.col(k) = inv_sqrt_m.cwiseProduct(a.col(k));

    const double scale = std::max(1.0, std::abs(w[n - 1]));
    if (out.lambda[0] < -1e-10 * scale)
        throw numerical_error("solve_spectrum: negative eigenvalue beyond tolerance");

    // deterministic sign: largest-magnitude entry (earliest on ties) positive
    for (int k = 0; k < modes; ++k) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(out.phi(i, k));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        if (out.phi(arg, k) < 0.0) out.phi.col(k) = -out.phi.col(k);
    }
    return out;
}

WeylFit weyl_diagnostics(const Spectrum& spectrum, const DimensionData& dims, int k_lo,
                         int k_hi) {
    const int m = spectrum.modes();
    if (k_lo < 2) throw validation_error("weyl_diagnostics: window must exclude k = 1");
    if (k_hi <= k_lo) throw validation_error("weyl_diagnostics: empty window");
    if (k_hi > m) throw validation_error("weyl_diagnostics: window exceeds computed modes");
    const int top = static_cast<int>(std::floor(0.8 * m));
    if (k_hi > std::max(top, 2))
        throw validation_error("weyl_diagnostics: window reaches into the top 20% of computed "
                               "modes (discretization-corrupted)");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double lam = spectrum.lambda[k - 1];
        if (lam <= 0.0) continue;
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(lam);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 3) throw validation_error("weyl_diagnostics: too few positive eigenvalues in window");

    WeylFit fit;
    fit.k_lo = k_lo;
    fit.k_hi = k_hi;
    const double denom = count * sxx - sx * sx;
    fit.slope = (count * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / count;
    fit.ds_estimate = 2.0 / fit.slope;
    fit.ds_deviation = std::abs(fit.ds_estimate - dims.d_spectral);

    double rss = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double lam = spectrum.lambda[k - 1];
        if (lam <= 0.0) continue;
        const double pred = fit.intercept + fit.slope * std::log(static_cast<double>(k));
        rss += (std::log(lam) - pred) * (std::log(lam) - pred);
    }
    fit.rms_residual = std::sqrt(rss / count);
    return fit;
}

} // namespace fractalwave
