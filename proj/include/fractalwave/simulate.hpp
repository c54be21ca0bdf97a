#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractalwave/spectrum.hpp"
#include "fractalwave/wave_kernel.hpp"

namespace fractalwave {

enum class Parallelism { openmp, serial };

/// Per-mode amplitude/velocity pairs of the truncated solution, plus the
/// counter-based RNG coordinates that make every step reproducible.
struct SimulationState {
    double time = 0.0;
    double beta = 0.0;
    uint64_t seed = 0;
    uint64_t step_index = 0;
    uint32_t replica = 0;
    std::shared_ptr<const Spectrum> spectrum;
    Eigen::VectorXd y;    // mode amplitudes Y_k
    Eigen::VectorXd ydot; // mode velocities

    int modes() const { return static_cast<int>(y.size()); }
};

SimulationState init_simulation(std::shared_ptr<const Spectrum> spectrum, double beta, int modes,
                                uint64_t seed,
                                std::span<const std::pair<double, double>> initial = {},
                                uint32_t replica = 0);

/// Exact one-step transition law for the first `modes` eigenvalues, with the
/// noise Cholesky factors precomputed. Reusable across replicas and steps of
/// the same size.
struct TransitionTable {
    double step = 0.0;
    double beta = 0.0;
    std::vector<ModeTransition> modes;
    std::vector<Eigen::Matrix2d> noise_factor;
};

TransitionTable transition_table(const Spectrum& spectrum, double beta, int modes, double h);

/// Advance by the table's step: per mode, X <- mean X + L z with z the two
/// normals of the mode's counter stream. Mode updates are independent, so the
/// result is bitwise identical between the OpenMP and serial paths.
void advance(SimulationState& state, const TransitionTable& table,
             Parallelism par = Parallelism::openmp);

/// Convenience overload building the table on the fly.
void advance(SimulationState& state, double h, Parallelism par = Parallelism::openmp);

struct FieldSample {
    double time = 0.0;
    std::vector<int> vertices; // complex vertex ids
    Eigen::VectorXd values;    // u(t, x) = sum_k Y_k phi_k(x); pinned -> 0
};

FieldSample field_at(const SimulationState& state, std::span<const int> vertex_ids);

} // namespace fractalwave
