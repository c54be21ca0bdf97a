#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractalwave/errors.hpp"

namespace fractalwave {

/// One level-1 image point: boundary point `label` of copy `map`.
struct GluePoint {
    int map = 0;    // contraction index, 0-based
    int label = 0;  // boundary label index, 0-based
    friend bool operator==(const GluePoint&, const GluePoint&) = default;
};

/// Optional affine realization in R^d, used only for coordinate output.
struct Embedding {
    int dim = 0;
    std::vector<Eigen::MatrixXd> linear;          // per contraction
    std::vector<Eigen::VectorXd> offset;          // per contraction
    std::vector<Eigen::VectorXd> boundary_coords; // per boundary label
};

/// Combinatorial description of a p.c.f. self-similar set: how each
/// contraction maps the boundary set, and which level-1 image points are
/// identified. Everything downstream (complexes, energies, spectra) is
/// derived from this data.
struct FractalSpec {
    static constexpr int kInterior = -1;

    std::string name;
    int map_count = 0;                            // number of contractions
    std::vector<std::string> boundary;            // boundary labels, ordered
    std::vector<std::vector<int>> boundary_image; // [map][label] -> label index or kInterior
    std::vector<std::pair<GluePoint, GluePoint>> gluings;
    std::optional<Embedding> embedding;

    int boundary_size() const { return static_cast<int>(boundary.size()); }
    int label_index(const std::string& label) const;
};

struct Cell {
    std::vector<int> word;     // letters in 0..M-1, length == level
    std::vector<int> vertices; // vertex ids, one per boundary label, label order
};

/// Level-n vertex complex: canonical integer ids for the points of F^n, plus
/// the word cells referencing them. Ids are stable across levels: the level-m
/// complex is the prefix of the level-n one for m < n.
struct VertexComplex {
    int level = 0;
    int vertex_count = 0;
    std::vector<Cell> cells;       // M^level cells in lexicographic word order
    std::vector<int> boundary_ids; // ids of the boundary set (0..N0-1 by construction)
    // minimal-depth (word, label) representative per vertex id
    std::vector<std::pair<std::vector<int>, int>> canonical;
};

/// Per-word resistance weight r_w and self-similar measure mu_w = r_w^{d_H}.
struct CellWeights {
    int level = 0;
    double d_hausdorff = 0.0;
    std::vector<double> resistance; // cell order matches VertexComplex::cells
    std::vector<double> measure;
};

struct GluingDiagnostics {
    int identifications = 0; // distinct gluing pairs applied at level 1
    bool connected = false;
    bool boundary_injects = false;
    int level1_vertices = 0;
};

VertexComplex expand_complex(const FractalSpec& spec, int level);

CellWeights cell_table(const FractalSpec& spec, std::span<const double> r,
                       double d_hausdorff, int level);

/// Validates the gluing structure: well-formed pairs, level-1 connectivity,
/// boundary injecting into the level-1 complex. Throws structural_error on
/// malformed or disconnected input.
GluingDiagnostics verify_gluing(const FractalSpec& spec);

/// Coordinates of every vertex of the complex under the spec's embedding.
/// Requires spec.embedding.
std::vector<Eigen::VectorXd> vertex_coordinates(const FractalSpec& spec,
                                                const VertexComplex& complex);

} // namespace fractalwave
