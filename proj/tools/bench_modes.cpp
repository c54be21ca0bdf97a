// Microbenchmark: OpenMP mode-parallel kernels against their serial
// reference implementations. The two paths are bitwise identical by
// construction (counter-based noise streams, per-row reductions), which is
// asserted here before timing.

#include <chrono>
#include <cstdio>
#include <memory>
#include <vector>

#include <omp.h>

#include "fractalwave/simulate.hpp"
#include "fractalwave/variogram.hpp"

namespace fw = fractalwave;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// synthetic spectrum following the interval Weyl law; no eigensolve needed
std::shared_ptr<fw::Spectrum> synthetic_spectrum(int modes) {
    auto sp = std::make_shared<fw::Spectrum>();
    sp->level = 0;
    sp->complex_vertex_count = 1;
    sp->kept = {0};
    sp->index_of = {0};
    sp->lambda.resize(modes);
    for (int k = 0; k < modes; ++k) sp->lambda[k] = (k + 1.0) * (k + 1.0) * 9.8696;
    sp->phi = Eigen::MatrixXd::Ones(1, modes);
    return sp;
}

template <class Fn>
double time_best_of(int repeats, const Fn& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = now();
        fn();
        best = std::min(best, now() - t0);
    }
    return best;
}

} // namespace

int main() {
    const double beta = 1.0;
    std::printf("threads: %d\n\n", omp_get_max_threads());

    {
        const int modes = 1 << 20;
        const int steps = 4;
        auto sp = synthetic_spectrum(modes);
        const fw::TransitionTable table = fw::transition_table(*sp, beta, modes, 0.25);

        fw::SimulationState serial = fw::init_simulation(sp, beta, modes, 7);
        fw::SimulationState parallel = fw::init_simulation(sp, beta, modes, 7);
        for (int s = 0; s < steps; ++s) {
            fw::advance(serial, table, fw::Parallelism::serial);
            fw::advance(parallel, table, fw::Parallelism::openmp);
        }
        if (serial.y != parallel.y || serial.ydot != parallel.ydot) {
            std::printf("FATAL: serial and openmp advance disagree\n");
            return 1;
        }

        const double t_serial = time_best_of(3, [&] {
            fw::SimulationState st = fw::init_simulation(sp, beta, modes, 7);
            for (int s = 0; s < steps; ++s) fw::advance(st, table, fw::Parallelism::serial);
        });
        const double t_parallel = time_best_of(3, [&] {
            fw::SimulationState st = fw::init_simulation(sp, beta, modes, 7);
            for (int s = 0; s < steps; ++s) fw::advance(st, table, fw::Parallelism::openmp);
        });
        std::printf("advance, %d modes x %d steps\n", modes, steps);
        std::printf("  serial  %8.1f ms  (%5.1f ns/mode-step)\n", 1e3 * t_serial,
                    1e9 * t_serial / modes / steps);
        std::printf("  openmp  %8.1f ms  (%5.1f ns/mode-step)  speedup %.2fx\n",
                    1e3 * t_parallel, 1e9 * t_parallel / modes / steps, t_serial / t_parallel);
    }

    {
        const int modes = 4096;
        auto sp = synthetic_spectrum(modes);
        std::vector<double> lags(64);
        for (size_t i = 0; i < lags.size(); ++i)
            lags[i] = 1e-3 * std::pow(300.0, i / (lags.size() - 1.0));
        const std::vector<double> lambdas(sp->lambda.data(), sp->lambda.data() + modes);

        const fw::VariogramTable serial_table =
            fw::l2_modulus_exact(lambdas, beta, 2.0, lags, modes, fw::Parallelism::serial);
        const fw::VariogramTable parallel_table =
            fw::l2_modulus_exact(lambdas, beta, 2.0, lags, modes, fw::Parallelism::openmp);
        for (size_t i = 0; i < lags.size(); ++i)
            if (serial_table.rows[i].value != parallel_table.rows[i].value) {
                std::printf("FATAL: serial and openmp variogram disagree\n");
                return 1;
            }

        const double t_serial = time_best_of(3, [&] {
            fw::l2_modulus_exact(lambdas, beta, 2.0, lags, modes, fw::Parallelism::serial);
        });
        const double t_parallel = time_best_of(3, [&] {
            fw::l2_modulus_exact(lambdas, beta, 2.0, lags, modes, fw::Parallelism::openmp);
        });
        std::printf("\nl2 modulus, %d modes x %zu lags\n", modes, lags.size());
        std::printf("  serial  %8.1f ms\n", 1e3 * t_serial);
        std::printf("  openmp  %8.1f ms  speedup %.2fx\n", 1e3 * t_parallel,
                    t_serial / t_parallel);
    }
    return 0;
}
