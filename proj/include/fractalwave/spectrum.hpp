#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fractalwave/harmonic.hpp"

namespace fractalwave {

/// Lowest K eigenpairs of (-H) phi = lambda M phi on the reduced vertex set.
/// Eigenvectors are mass-orthonormal (phi_j^T M phi_k = delta_jk) and carry a
/// deterministic sign (largest-magnitude entry positive).
struct Spectrum {
    BoundaryCondition b;
    int level = 0;
    int complex_vertex_count = 0;
    Eigen::VectorXd lambda; // ascending
    Eigen::MatrixXd phi;    // dim() x modes()
    std::vector<int> kept;
    std::vector<int> index_of; // complex vertex id -> row of phi, or -1 if pinned

    int dim() const { return static_cast<int>(kept.size()); }
    int modes() const { return static_cast<int>(lambda.size()); }

    /// Eigenfunction value at a complex vertex; pinned vertices read 0.
    double value_at(int complex_vertex, int mode) const {
        const int row = index_of.at(complex_vertex);
        return row < 0 ? 0.0 : phi(row, mode);
    }
};

Spectrum solve_spectrum(const EnergySystem& system, int modes);

struct WeylFit {
    double slope = 0.0;     // of log lambda_k against log k
    double intercept = 0.0; // log of the prefactor
    double ds_estimate = 0.0;
    double ds_deviation = 0.0;
    double rms_residual = 0.0;
    int k_lo = 0, k_hi = 0;
};

/// Least-squares fit of log lambda_k vs log k over k in [k_lo, k_hi].
/// The window must exclude k = 1 and the top 20% of computed modes.
WeylFit weyl_diagnostics(const Spectrum& spectrum, const DimensionData& dims, int k_lo,
                         int k_hi);

} // namespace fractalwave
