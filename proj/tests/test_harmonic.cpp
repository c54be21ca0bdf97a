#include <doctest.h>

#include <cmath>
#include <random>

#include "fractalwave/harmonic.hpp"
#include "fractalwave/presets.hpp"
#include "fractalwave/spectrum.hpp"

using namespace fractalwave;

namespace {

struct Assembled {
    VertexComplex complex;
    SparseMatrix h;
    Eigen::VectorXd mass;
};

Assembled assemble(const FractalSystem& system, int level) {
    const DimensionData dims = dimension_exponents(system.harmonic.r);
    VertexComplex complex = expand_complex(system.spec, level);
    const CellWeights cells = cell_table(system.spec, system.harmonic.r, dims.d_hausdorff, level);
    SparseMatrix h = assemble_energy(complex, system.harmonic, cells);
    Eigen::VectorXd mass = assemble_mass(complex, cells);
    return {std::move(complex), std::move(h), std::move(mass)};
}

} // namespace

TEST_CASE("dimension exponents for the shipped structures") {
    const DimensionData interval = dimension_exponents(std::vector<double>{0.5, 0.5});
    CHECK(interval.d_hausdorff == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(interval.d_spectral == doctest::Approx(1.0).epsilon(1e-12));

    const DimensionData gasket = dimension_exponents(std::vector<double>{0.6, 0.6, 0.6});
    CHECK(gasket.d_hausdorff ==
          doctest::Approx(std::log(3.0) / std::log(5.0 / 3.0)).epsilon(1e-12));
    CHECK(gasket.d_spectral ==
          doctest::Approx(2.0 * std::log(3.0) / std::log(5.0)).epsilon(1e-12));

    // hata: root of (1/2)^d + (3/4)^d = 1, verified by residual
    const std::vector<double> hr{0.5, 0.75};
    const DimensionData hata = dimension_exponents(hr);
    const double residual =
        std::pow(0.5, hata.d_hausdorff) + std::pow(0.75, hata.d_hausdorff) - 1.0;
    CHECK(std::abs(residual) < 1e-13);
    CHECK(hata.d_spectral > 0.0);
    CHECK(hata.d_spectral < 2.0);

    CHECK_THROWS_AS(dimension_exponents(std::vector<double>{0.5, 1.0}), validation_error);
}

TEST_CASE("interval level-1 energy is the two-resistor chain") {
    const FractalSystem interval = preset("interval");
    const Assembled a = assemble(interval, 1);
    // vertices: 0, 1 (endpoints), 2 (midpoint); conductance 2 per half
    Eigen::MatrixXd expected(3, 3);
    expected << -2, 0, 2,
                 0, -2, 2,
                 2, 2, -4;
    CHECK((Eigen::MatrixXd(a.h) - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(a.mass[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(a.mass[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(a.mass[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("level-0 energy is A0 itself") {
    for (const std::string& name : preset_names()) {
        const FractalSystem system = preset(name);
        const Assembled a = assemble(system, 0);
        CHECK((Eigen::MatrixXd(a.h) - system.harmonic.a0).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("gasket level-1 energy: conductance 5/3, interior degree 4") {
    const FractalSystem gasket = preset("gasket");
    const Assembled a = assemble(gasket, 1);
    const Eigen::MatrixXd h(a.h);
    // corners keep degree 2, glued midpoints have degree 4
    for (int corner = 0; corner < 3; ++corner)
        CHECK(h(corner, corner) == doctest::Approx(-10.0 / 3.0).epsilon(1e-13));
    for (int mid = 3; mid < 6; ++mid)
        CHECK(h(mid, mid) == doctest::Approx(-20.0 / 3.0).epsilon(1e-13));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j) CHECK((h(i, j) == doctest::Approx(0.0) || h(i, j) == doctest::Approx(5.0 / 3.0)));
    // masses: corner in one cell, midpoint in two
    for (int corner = 0; corner < 3; ++corner)
        CHECK(a.mass[corner] == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    for (int mid = 3; mid < 6; ++mid)
        CHECK(a.mass[mid] == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("energy rows sum to zero and masses to one at several levels") {
    for (const std::string& name : preset_names()) {
        const FractalSystem system = preset(name);
        for (int level : {1, 3, 5}) {
            const Assembled a = assemble(system, level);
            const Eigen::VectorXd row_sums = Eigen::MatrixXd(a.h).rowwise().sum();
            CHECK(row_sums.cwiseAbs().maxCoeff() < 1e-10);
            CHECK(a.mass.sum() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(a.mass.minCoeff() > 0.0);
        }
    }
}

TEST_CASE("energy quadratic form is non-negative on random functions") {
    std::mt19937 gen(7);
    std::normal_distribution<double> normal;
    for (const std::string& name : preset_names()) {
        const FractalSystem system = preset(name);
        const Assembled a = assemble(system, 3);
        for (int trial = 0; trial < 1000; ++trial) {
            Eigen::VectorXd f(a.complex.vertex_count);
            for (int i = 0; i < f.size(); ++i) f[i] = normal(gen);
            CHECK(-f.dot(a.h * f) > -1e-9 * f.squaredNorm());
        }
    }
}

TEST_CASE("boundary reduction dimensions") {
    const FractalSystem interval = preset("interval");
    const Assembled a = assemble(interval, 3);
    const EnergySystem dirichlet =
        reduce_boundary(a.complex, a.h, a.mass, BoundaryCondition::dirichlet());
    CHECK(dirichlet.dim() == 7);
    const EnergySystem neumann =
        reduce_boundary(a.complex, a.h, a.mass, BoundaryCondition::neumann(interval.spec));
    CHECK(neumann.dim() == 9);
    CHECK((Eigen::MatrixXd(neumann.h) - Eigen::MatrixXd(a.h)).cwiseAbs().maxCoeff() == 0.0);

    const FractalSystem gasket = preset("gasket");
    const Assembled g = assemble(gasket, 1);
    const EnergySystem mixed =
        reduce_boundary(g.complex, g.h, g.mass, BoundaryCondition::parse("p1", gasket.spec));
    CHECK(mixed.dim() == 4);

    CHECK_THROWS_AS(BoundaryCondition::parse("nope", gasket.spec), validation_error);
}

TEST_CASE("harmonic renormalization: presets pass, perturbed gasket fails") {
    for (const std::string& name : preset_names()) {
        const FractalSystem system = preset(name);
        const RenormalizationCheck check = verify_harmonic_structure(system.spec, system.harmonic);
        CHECK(check.pass);
        CHECK(check.residual < 1e-12);
    }
    FractalSystem wrong = preset("gasket");
    wrong.harmonic.r = {0.5, 0.5, 0.5};
    const RenormalizationCheck check = verify_harmonic_structure(wrong.spec, wrong.harmonic);
    CHECK_FALSE(check.pass);
    CHECK(check.residual > 1e-3);
}

TEST_CASE("hata structure also renormalizes at other parameter values") {
    for (double h : {1.5, 2.0, 3.0, 5.0}) {
        const FractalSystem system = preset("hata", h);
        CHECK(verify_harmonic_structure(system.spec, system.harmonic).pass);
    }
}

TEST_CASE("harmonic validation rejects broken structures") {
    const FractalSystem interval = preset("interval");
    HarmonicStructure bad = interval.harmonic;
    bad.a0(0, 1) = 2.0; // asymmetric
    CHECK_THROWS_AS(validate_harmonic(interval.spec, bad), structural_error);
    bad = interval.harmonic;
    bad.r = {0.5, 1.2};
    CHECK_THROWS_AS(validate_harmonic(interval.spec, bad), validation_error);
}

TEST_CASE("effective resistance on the interval: series resistors at every level") {
    const FractalSystem interval = preset("interval");
    for (int level : {1, 2, 3, 4}) {
        const Assembled a = assemble(interval, level);
        const EnergySystem neumann =
            reduce_boundary(a.complex, a.h, a.mass, BoundaryCondition::neumann(interval.spec));
        const ResistanceSolver solver(neumann);
        CHECK(solver.resistance(0, 1) == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(solver.resistance(0, 0) == 0.0);
        if (level >= 1) {
            // midpoint has id 2 at every level by canonical stability
            CHECK(solver.resistance(0, 2) == doctest::Approx(0.5).epsilon(1e-11));
        }
    }
}

TEST_CASE("resistance nested consistency on all presets") {
    for (const std::string& name : preset_names()) {
        const FractalSystem system = preset(name);
        const VertexComplex base = expand_complex(system.spec, 1);
        std::vector<double> reference;
        for (int level = 1; level <= 4; ++level) {
            const Assembled a = assemble(system, level);
            const EnergySystem neumann =
                reduce_boundary(a.complex, a.h, a.mass, BoundaryCondition::neumann(system.spec));
            const ResistanceSolver solver(neumann);
            size_t slot = 0;
            for (int x = 0; x < base.vertex_count; ++x)
                for (int y = x + 1; y < base.vertex_count; ++y) {
                    const double r = solver.resistance(x, y);
                    if (level == 1)
                        reference.push_back(r);
                    else
                        CHECK(r == doctest::Approx(reference[slot]).epsilon(1e-9));
                    ++slot;
                }
        }
    }
}

TEST_CASE("resistance metric properties on sampled triples") {
    const FractalSystem gasket = preset("gasket");
    const Assembled a = assemble(gasket, 3);
    const EnergySystem neumann =
        reduce_boundary(a.complex, a.h, a.mass, BoundaryCondition::neumann(gasket.spec));
    const ResistanceSolver solver(neumann);
    std::mt19937 gen(3);
    std::uniform_int_distribution<int> pick(0, a.complex.vertex_count - 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int x = pick(gen), y = pick(gen), z = pick(gen);
        const double rxy = solver.resistance(x, y);
        const double ryx = solver.resistance(y, x);
        CHECK(rxy == doctest::Approx(ryx).epsilon(1e-12));
        if (x != y) CHECK(rxy > 0.0);
        // sqrt(R) satisfies the triangle inequality
        CHECK(std::sqrt(solver.resistance(x, z)) <=
              std::sqrt(rxy) + std::sqrt(solver.resistance(y, z)) + 1e-9);
    }
}

TEST_CASE("discrete Holder embedding: |phi(x)-phi(y)|^2 <= R(x,y) lambda") {
    const FractalSystem gasket = preset("gasket");
    const Assembled a = assemble(gasket, 3);
    const EnergySystem neumann =
        reduce_boundary(a.complex, a.h, a.mass, BoundaryCondition::neumann(gasket.spec));
    const ResistanceSolver solver(neumann);
    const Spectrum spectrum = solve_spectrum(neumann, 20);
    std::mt19937 gen(11);
    std::uniform_int_distribution<int> pick(0, a.complex.vertex_count - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const int x = pick(gen), y = pick(gen);
        if (x == y) continue;
        const double r = solver.resistance(x, y);
        for (int k = 1; k < 20; ++k) {
            const double dphi = spectrum.value_at(x, k) - spectrum.value_at(y, k);
            CHECK(dphi * dphi <= r * spectrum.lambda[k] * (1.0 + 1e-9) + 1e-12);
        }
    }
}
