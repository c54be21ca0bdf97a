#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fractalwave/fractal_spec.hpp"

namespace fractalwave {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Boundary energy matrix A0 (Laplacian sign convention, zero row sums) and
/// the resistance scaling weights of a regular harmonic structure.
struct HarmonicStructure {
    Eigen::MatrixXd a0;
    std::vector<double> r;
};

/// Structural validation of (A0, r): symmetry, zero row sums, non-negative
/// off-diagonals, irreducibility, regularity. Throws on violation.
void validate_harmonic(const FractalSpec& spec, const HarmonicStructure& hs);

struct DimensionData {
    double d_hausdorff = 0.0;
    double d_spectral = 0.0;
};

/// d_H solves sum_i r_i^d = 1; d_s = 2 d_H / (d_H + 1).
DimensionData dimension_exponents(std::span<const double> r);

/// Level-n energy matrix: H_n = sum_w r_w^{-1} scatter(A0, cell w).
/// Laplacian sign convention, so -H_n is positive semi-definite.
SparseMatrix assemble_energy(const VertexComplex& complex, const HarmonicStructure& hs,
                             const CellWeights& cells);

/// Lumped mass: each cell splits its measure equally over its cell vertices.
Eigen::VectorXd assemble_mass(const VertexComplex& complex, const CellWeights& cells);

/// Subset of the boundary left free; the complement is pinned to zero.
struct BoundaryCondition {
    std::vector<int> free_labels; // sorted boundary label indices

    static BoundaryCondition neumann(const FractalSpec& spec);
    static BoundaryCondition dirichlet();
    /// Accepts "N", "D", or a comma-separated list of boundary labels.
    static BoundaryCondition parse(const std::string& text, const FractalSpec& spec);

    bool is_neumann(int boundary_size) const {
        return static_cast<int>(free_labels.size()) == boundary_size;
    }
    bool is_dirichlet() const { return free_labels.empty(); }
    std::string describe(const FractalSpec& spec) const;
    std::string key() const; // stable short form for filenames/captions
};

/// All 2^{N0} boundary conditions of a spec, Dirichlet first, Neumann last.
std::vector<BoundaryCondition> all_boundary_conditions(const FractalSpec& spec);

/// Energy/mass system after pinning the complement of b to zero.
struct EnergySystem {
    int level = 0;
    BoundaryCondition b;
    SparseMatrix h;          // reduced, Laplacian sign
    Eigen::VectorXd mass;    // reduced, strictly positive
    std::vector<int> kept;   // reduced index -> complex vertex id
    std::vector<int> index_of; // complex vertex id -> reduced index, or -1 if pinned

    int dim() const { return static_cast<int>(kept.size()); }
};

EnergySystem reduce_boundary(const VertexComplex& complex, const SparseMatrix& h,
                             const Eigen::VectorXd& mass, const BoundaryCondition& b);

struct RenormalizationCheck {
    double residual = 0.0; // max-abs difference between the level-1 trace and A0
    bool pass = false;
};

/// The defining compatibility of a harmonic structure: eliminating the
/// interior of the level-1 complex from -H_1 must reproduce -A0.
RenormalizationCheck verify_harmonic_structure(const FractalSpec& spec,
                                               const HarmonicStructure& hs);

/// Effective resistance between vertices of a Neumann system. One sparse
/// factorization (grounded at an arbitrary vertex) serves all pairs.
class ResistanceSolver {
  public:
    explicit ResistanceSolver(EnergySystem neumann_system);

    /// R(x,y) for complex vertex ids; R(x,x) = 0 by convention.
    double resistance(int x, int y) const;

  private:
    EnergySystem system_;
    int ground_ = 0; // reduced index removed from the solve
    Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

struct ResistanceRow {
    int x = 0, y = 0;
    double value = 0.0;
};

std::vector<ResistanceRow> resistance_table(const ResistanceSolver& solver,
                                            std::span<const std::pair<int, int>> pairs);

} // namespace fractalwave
