#include "fractalwave/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace fractalwave {

void validate_harmonic(const FractalSpec& spec, const HarmonicStructure& hs) {
    const int n0 = spec.boundary_size();
    if (hs.a0.rows() != n0 || hs.a0.cols() != n0)
        throw validation_error("harmonic structure: A0 must be boundary-sized (" +
                               std::to_string(n0) + "x" + std::to_string(n0) + ")");
    if (static_cast<int>(hs.r.size()) != spec.map_count)
        throw validation_error("harmonic structure: need one r per contraction");
    for (double ri : hs.r)
        if (!(ri > 0.0 && ri < 1.0))
            throw validation_error("harmonic structure: regularity requires r_i in (0,1)");
    if ((hs.a0 - hs.a0.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw structural_error("harmonic structure: A0 must be symmetric");
    if (hs.a0.rowwise().sum().cwiseAbs().maxCoeff() > 1e-12)
        throw structural_error("harmonic structure: A0 rows must sum to zero");
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j)
            if (i != j && hs.a0(i, j) < 0.0)
                throw structural_error("harmonic structure: off-diagonal entries must be >= 0");

    // irreducibility: the conductance graph on the boundary set is connected
    std::vector<char> visited(n0, 0);
    std::queue<int> frontier;
    frontier.push(0);
    visited[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int u = 0; u < n0; ++u)
            if (!visited[u] && hs.a0(v, u) > 0.0) {
                visited[u] = 1;
                ++reached;
                frontier.push(u);
            }
    }
    if (reached != n0)
        throw structural_error("harmonic structure: A0 conductance graph is not connected");
}

DimensionData dimension_exponents(std::span<const double> r) {
    if (r.empty()) throw validation_error("dimension_exponents: empty weight vector");
    for (double ri : r)
        if (!(ri > 0.0 && ri < 1.0))
            throw validation_error("dimension_exponents: weights must lie in (0,1)");
    const auto g = [&](double d) {
        double s = 0.0;
        for (double ri : r) s += std::pow(ri, d);
        return s - 1.0;
    };
    // g is strictly decreasing with g(0+) = M-1 > 0; bisection is plenty.
    double lo = 1e-9, hi = 64.0;
    if (g(hi) > 0.0) throw numerical_error("dimension_exponents: no root below d = 64");
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    DimensionData dims;
    dims.d_hausdorff = 0.5 * (lo + hi);
    if (std::abs(g(dims.d_hausdorff)) > 1e-13)
        throw numerical_error("dimension_exponents: bisection residual above 1e-13");
    dims.d_spectral = 2.0 * dims.d_hausdorff / (dims.d_hausdorff + 1.0);
    return dims;
}

SparseMatrix assemble_energy(const VertexComplex& complex, const HarmonicStructure& hs,
                             const CellWeights& cells) {
    if (cells.level != complex.level)
        throw validation_error("assemble_energy: complex and cell table level mismatch");
    const int n0 = static_cast<int>(hs.a0.rows());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(complex.cells.size() * n0 * n0);
    for (size_t c = 0; c < complex.cells.size(); ++c) {
        const Cell& cell = complex.cells[c];
        const double scale = 1.0 / cells.resistance[c];
        for (int a = 0; a < n0; ++a)
            for (int b = 0; b < n0; ++b)
                triplets.emplace_back(cell.vertices[a], cell.vertices[b], scale * hs.a0(a, b));
    }
    SparseMatrix h(complex.vertex_count, complex.vertex_count);
    h.setFromTriplets(triplets.begin(), triplets.end());
    h.makeCompressed();
    return h;
}

Eigen::VectorXd assemble_mass(const VertexComplex& complex, const CellWeights& cells) {
    if (cells.level != complex.level)
        throw validation_error("assemble_mass: complex and cell table level mismatch");
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(complex.vertex_count);
    for (size_t c = 0; c < complex.cells.size(); ++c) {
        const Cell& cell = complex.cells[c];
        const double share = cells.measure[c] / static_cast<double>(cell.vertices.size());
        for (int v : cell.vertices) mass[v] += share;
    }
    return mass;
}

BoundaryCondition BoundaryCondition::neumann(const FractalSpec& spec) {
    BoundaryCondition b;
    b.free_labels.resize(spec.boundary_size());
    for (int i = 0; i < spec.boundary_size(); ++i) b.free_labels[i] = i;
    return b;
}

BoundaryCondition BoundaryCondition::dirichlet() { return {}; }

BoundaryCondition BoundaryCondition::parse(const std::string& text, const FractalSpec& spec) {
    if (text == "N" || text == "n") return neumann(spec);
    if (text == "D" || text == "d") return dirichlet();
    BoundaryCondition b;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token.empty()) continue;
        const int idx = spec.label_index(token);
        if (idx < 0)
            throw validation_error("boundary condition references unknown label '" + token + "'");
        b.free_labels.push_back(idx);
    }
    std::sort(b.free_labels.begin(), b.free_labels.end());
    b.free_labels.erase(std::unique(b.free_labels.begin(), b.free_labels.end()),
                        b.free_labels.end());
    return b;
}

std::string BoundaryCondition::describe(const FractalSpec& spec) const {
    if (is_neumann(spec.boundary_size())) return "N";
    if (is_dirichlet()) return "D";
    std::string out;
    for (size_t i = 0; i < free_labels.size(); ++i) {
        if (i) out += ",";
        out += spec.boundary[free_labels[i]];
    }
    return out;
}

std::string BoundaryCondition::key() const {
    if (is_dirichlet()) return "D";
    std::string out = "b";
    for (int idx : free_labels) out += std::to_string(idx);
    return out;
}

std::vector<BoundaryCondition> all_boundary_conditions(const FractalSpec& spec) {
    const int n0 = spec.boundary_size();
    std::vector<BoundaryCondition> out;
    out.reserve(size_t{1} << n0);
    for (int mask = 0; mask < (1 << n0); ++mask) {
        BoundaryCondition b;
        for (int i = 0; i < n0; ++i)
            if (mask & (1 << i)) b.free_labels.push_back(i);
        out.push_back(std::move(b));
    }
    return out;
}

EnergySystem reduce_boundary(const VertexComplex& complex, const SparseMatrix& h,
                             const Eigen::VectorXd& mass, const BoundaryCondition& b) {
    const int n0 = static_cast<int>(complex.boundary_ids.size());
    for (int idx : b.free_labels)
        if (idx < 0 || idx >= n0)
            throw validation_error("reduce_boundary: free label index out of range");

    std::vector<char> pinned(complex.vertex_count, 0);
    std::vector<char> is_free(n0, 0);
    for (int idx : b.free_labels) is_free[idx] = 1;
    for (int p = 0; p < n0; ++p)
        if (!is_free[p]) pinned[complex.boundary_ids[p]] = 1;

    EnergySystem sys;
    sys.level = complex.level;
    sys.b = b;
    sys.index_of.assign(complex.vertex_count, -1);
    for (int v = 0; v < complex.vertex_count; ++v)
        if (!pinned[v]) {
            sys.index_of[v] = static_cast<int>(sys.kept.size());
            sys.kept.push_back(v);
        }

    const int n = sys.dim();
    sys.mass.resize(n);
    for (int i = 0; i < n; ++i) sys.mass[i] = mass[sys.kept[i]];

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(h.nonZeros());
    for (int col = 0; col < h.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(h, col); it; ++it) {
            const int ri = sys.index_of[static_cast<int>(it.row())];
            const int ci = sys.index_of[col];
            if (ri >= 0 && ci >= 0) triplets.emplace_back(ri, ci, it.value());
        }
    sys.h.resize(n, n);
    sys.h.setFromTriplets(triplets.begin(), triplets.end());
    sys.h.makeCompressed();
    return sys;
}

RenormalizationCheck verify_harmonic_structure(const FractalSpec& spec,
                                               const HarmonicStructure& hs) {
    validate_harmonic(spec, hs);
    const VertexComplex level1 = expand_complex(spec, 1);
    const DimensionData dims = dimension_exponents(hs.r);
    const CellWeights cells = cell_table(spec, hs.r, dims.d_hausdorff, 1);
    const Eigen::MatrixXd g = -Eigen::MatrixXd(assemble_energy(level1, hs, cells));

    const int n0 = spec.boundary_size();
    const int n = level1.vertex_count;
    // boundary ids are 0..n0-1 by canonical ordering
    const Eigen::MatrixXd gbb = g.topLeftCorner(n0, n0);
    const Eigen::MatrixXd gbi = g.topRightCorner(n0, n - n0);
    const Eigen::MatrixXd gii = g.bottomRightCorner(n - n0, n - n0);
    Eigen::LDLT<Eigen::MatrixXd> interior(gii);
    if (interior.info() != Eigen::Success || !interior.isPositive())
        throw structural_error(
            "verify_harmonic_structure: interior block is singular (not irreducible)");
    const Eigen::MatrixXd schur = gbb - gbi * interior.solve(gbi.transpose());

    RenormalizationCheck check;
    check.residual = (schur - (-hs.a0)).cwiseAbs().maxCoeff();
    check.pass = check.residual < 1e-10;
    return check;
}

ResistanceSolver::ResistanceSolver(EnergySystem neumann_system)
    : system_(std::move(neumann_system)) {
    if (static_cast<size_t>(system_.dim()) !=
        static_cast<size_t>(std::count_if(system_.index_of.begin(), system_.index_of.end(),
                                          [](int i) { return i >= 0; })))
        throw validation_error("ResistanceSolver: inconsistent system");
    if (system_.dim() < 2) throw validation_error("ResistanceSolver: system too small");
    // effective resistance needs the full (Neumann) network
    if (static_cast<int>(std::count(system_.index_of.begin(), system_.index_of.end(), -1)) != 0)
        throw validation_error("ResistanceSolver: requires the Neumann (unpinned) system");

    const int n = system_.dim();
    ground_ = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(system_.h.nonZeros());
    for (int col = 0; col < system_.h.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(system_.h, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (r == ground_ || col == ground_) continue;
            const int ri = r > ground_ ? r - 1 : r;
            const int ci = col > ground_ ? col - 1 : col;
            triplets.emplace_back(ri, ci, -it.value());
        }
    SparseMatrix grounded(n - 1, n - 1);
    grounded.setFromTriplets(triplets.begin(), triplets.end());
    grounded.makeCompressed();
    solver_.compute(grounded);
    if (solver_.info() != Eigen::Success)
        throw structural_error("ResistanceSolver: grounded energy matrix is not factorizable "
                               "(disconnected network?)");
}

double ResistanceSolver::resistance(int x, int y) const {
    if (x == y) return 0.0;
    const int n = system_.dim();
    const auto reduced = [&](int id) {
        if (id < 0 || id >= static_cast<int>(system_.index_of.size()))
            throw validation_error("resistance: unknown vertex id " + std::to_string(id));
        return system_.index_of[id];
    };
    const int rx = reduced(x), ry = reduced(y);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n - 1);
    if (rx != ground_) e[rx > ground_ ? rx - 1 : rx] += 1.0;
    if (ry != ground_) e[ry > ground_ ? ry - 1 : ry] -= 1.0;
    const Eigen::VectorXd z = solver_.solve(e);
    const double value = e.dot(z);
    if (!std::isfinite(value))
        throw structural_error("resistance: solve produced a non-finite value");
    return value;
}

std::vector<ResistanceRow> resistance_table(const ResistanceSolver& solver,
                                            std::span<const std::pair<int, int>> pairs) {
    std::vector<ResistanceRow> rows;
    rows.reserve(pairs.size());
    for (const auto& [x, y] : pairs) rows.push_back({x, y, solver.resistance(x, y)});
    return rows;
}

} // namespace fractalwave
