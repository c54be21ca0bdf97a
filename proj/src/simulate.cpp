#include "fractalwave/simulate.hpp"

#include <string>

#include "fractalwave/rng.hpp"

namespace fractalwave {

SimulationState init_simulation(std::shared_ptr<const Spectrum> spectrum, double beta, int modes,
                                uint64_t seed,
                                std::span<const std::pair<double, double>> initial,
                                uint32_t replica) {
    if (!spectrum) throw validation_error("init_simulation: null spectrum");
    if (beta < 0.0) throw validation_error("init_simulation: beta must be >= 0");
    if (modes < 1 || modes > spectrum->modes())
        throw validation_error("init_simulation: mode count " + std::to_string(modes) +
                               " outside 1.." + std::to_string(spectrum->modes()));
    if (!initial.empty() && static_cast<int>(initial.size()) != modes)
        throw validation_error("init_simulation: initial data must list every mode");

    SimulationState state;
    state.beta = beta;
    state.seed = seed;
    state.replica = replica;
    state.spectrum = std::move(spectrum);
    state.y = Eigen::VectorXd::Zero(modes);
    state.ydot = Eigen::VectorXd::Zero(modes);
    for (size_t k = 0; k < initial.size(); ++k) {
        state.y[static_cast<int>(k)] = initial[k].first;
        state.ydot[static_cast<int>(k)] = initial[k].second;
    }
    return state;
}

TransitionTable transition_table(const Spectrum& spectrum, double beta, int modes, double h) {
    if (modes < 1 || modes > spectrum.modes())
        throw validation_error("transition_table: mode count out of range");
    TransitionTable table;
    table.step = h;
    table.beta = beta;
    table.modes.resize(modes);
    table.noise_factor.resize(modes);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < modes; ++k) {
        const WaveParams p{beta, std::max(spectrum.lambda[k], 0.0)};
        table.modes[k] = mode_transition(p, h);
        table.noise_factor[k] = noise_cholesky(table.modes[k].noise);
    }
    return table;
}

namespace {

inline void step_mode(SimulationState& state, const TransitionTable& table, int k) {
    const auto [z1, z2] =
        rng::normal_pair(state.seed, static_cast<uint32_t>(k), state.step_index, state.replica);
    const Eigen::Matrix2d& m = table.modes[k].mean;
    const Eigen::Matrix2d& l = table.noise_factor[k];
    const double y = state.y[k], yd = state.ydot[k];
    state.y[k] = m(0, 0) * y + m(0, 1) * yd + l(0, 0) * z1;
    state.ydot[k] = m(1, 0) * y + m(1, 1) * yd + l(1, 0) * z1 + l(1, 1) * z2;
}

} // namespace

void advance(SimulationState& state, const TransitionTable& table, Parallelism par) {
    if (!(table.step > 0.0)) throw validation_error("advance: step must be > 0");
    if (static_cast<int>(table.modes.size()) < state.modes())
        throw validation_error("advance: transition table smaller than the state");
    if (table.beta != state.beta)
        throw validation_error("advance: transition table built for a different beta");

    const int n = state.modes();
    if (par == Parallelism::openmp) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n; ++k) step_mode(state, table, k);
    } else {
        for (int k = 0; k < n; ++k) step_mode(state, table, k);
    }
    state.time += table.step;
    ++state.step_index;
}

void advance(SimulationState& state, double h, Parallelism par) {
    if (!state.spectrum) throw validation_error("advance: state has no spectrum");
    advance(state, transition_table(*state.spectrum, state.beta, state.modes(), h), par);
}

FieldSample field_at(const SimulationState& state, std::span<const int> vertex_ids) {
    if (!state.spectrum) throw validation_error("field_at: state has no spectrum");
    const Spectrum& sp = *state.spectrum;
    FieldSample sample;
    sample.time = state.time;
    sample.vertices.assign(vertex_ids.begin(), vertex_ids.end());
    sample.values = Eigen::VectorXd::Zero(static_cast<int>(vertex_ids.size()));
    for (size_t i = 0; i < vertex_ids.size(); ++i) {
        const int id = vertex_ids[i];
        if (id < 0 || id >= sp.complex_vertex_count)
            throw validation_error("field_at: unknown vertex id " + std::to_string(id));
        const int row = sp.index_of[id];
        if (row < 0) continue; // pinned: exactly zero
        double u = 0.0;
        for (int k = 0; k < state.modes(); ++k) u += state.y[k] * sp.phi(row, k);
        sample.values[static_cast<int>(i)] = u;
    }
    return sample;
}

} // namespace fractalwave
