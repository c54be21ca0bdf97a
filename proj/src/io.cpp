#include "fractalwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace fractalwave {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open output file " + path.string());
    return out;
}

Eigen::MatrixXd parse_matrix(const json& node, const std::string& what) {
    if (!node.is_array() || node.empty() || !node[0].is_array())
        throw validation_error("spec file: " + what + " must be a matrix (array of arrays)");
    const size_t rows = node.size(), cols = node[0].size();
    Eigen::MatrixXd m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (node[i].size() != cols)
            throw validation_error("spec file: ragged matrix in " + what);
        for (size_t j = 0; j < cols; ++j) m(i, j) = node[i][j].get<double>();
    }
    return m;
}

} // namespace

FractalSystem parse_system(const json& doc) {
    FractalSystem system;
    FractalSpec& spec = system.spec;
    try {
        spec.name = doc.value("name", "unnamed");
        spec.map_count = doc.at("M").get<int>();
        spec.boundary = doc.at("boundary").get<std::vector<std::string>>();

        const json& images = doc.at("images");
        if (!images.is_array() || static_cast<int>(images.size()) != spec.map_count)
            throw validation_error("spec file: images must list one map per contraction");
        spec.boundary_image.resize(spec.map_count);
        for (int i = 0; i < spec.map_count; ++i) {
            spec.boundary_image[i].assign(spec.boundary_size(), FractalSpec::kInterior);
            for (int p = 0; p < spec.boundary_size(); ++p) {
                const json& entry = images[i].at(spec.boundary[p]);
                if (entry.is_null()) continue;
                const std::string target = entry.get<std::string>();
                const int idx = spec.label_index(target);
                // any non-boundary string is a fresh interior tag
                spec.boundary_image[i][p] = idx;
            }
        }

        for (const json& pair : doc.at("gluings")) {
            if (!pair.is_array() || pair.size() != 2)
                throw validation_error("spec file: each gluing must pair two image points");
            GluePoint pts[2];
            for (int side = 0; side < 2; ++side) {
                pts[side].map = pair[side].at(0).get<int>() - 1; // 1-based in files
                const std::string label = pair[side].at(1).get<std::string>();
                pts[side].label = spec.label_index(label);
                if (pts[side].label < 0)
                    throw structural_error("spec file: gluing references unknown label '" +
                                           label + "'");
            }
            spec.gluings.emplace_back(pts[0], pts[1]);
        }

        const json& harmonic = doc.at("harmonic");
        system.harmonic.a0 = parse_matrix(harmonic.at("A0"), "harmonic.A0");
        system.harmonic.r = harmonic.at("r").get<std::vector<double>>();

        if (doc.contains("embedding")) {
            const json& emb = doc.at("embedding");
            Embedding embedding;
            embedding.dim = emb.at("dim").get<int>();
            for (const json& map : emb.at("maps")) {
                embedding.linear.push_back(parse_matrix(map.at("A"), "embedding map"));
                const auto b = map.at("b").get<std::vector<double>>();
                embedding.offset.push_back(
                    Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
            }
            for (const json& point : emb.at("boundary")) {
                const auto x = point.get<std::vector<double>>();
                embedding.boundary_coords.push_back(
                    Eigen::Map<const Eigen::VectorXd>(x.data(), x.size()));
            }
            if (static_cast<int>(embedding.linear.size()) != spec.map_count ||
                static_cast<int>(embedding.boundary_coords.size()) != spec.boundary_size())
                throw validation_error("spec file: embedding size mismatch");
            spec.embedding = std::move(embedding);
        }
    } catch (const json::exception& err) {
        throw validation_error(std::string("spec file: ") + err.what());
    }
    verify_gluing(spec);
    validate_harmonic(spec, system.harmonic);
    return system;
}

FractalSystem load_system_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open spec file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& err) {
        throw validation_error("spec file " + path.string() + ": " + err.what());
    }
    return parse_system(doc);
}

json system_to_json(const FractalSystem& system) {
    const FractalSpec& spec = system.spec;
    json doc;
    doc["name"] = spec.name;
    doc["M"] = spec.map_count;
    doc["boundary"] = spec.boundary;
    json images = json::array();
    for (int i = 0; i < spec.map_count; ++i) {
        json row;
        for (int p = 0; p < spec.boundary_size(); ++p) {
            const int target = spec.boundary_image[i][p];
            row[spec.boundary[p]] =
                target == FractalSpec::kInterior ? json() : json(spec.boundary[target]);
        }
        images.push_back(std::move(row));
    }
    doc["images"] = std::move(images);
    json gluings = json::array();
    for (const auto& [a, b] : spec.gluings)
        gluings.push_back({{a.map + 1, spec.boundary[a.label]},
                           {b.map + 1, spec.boundary[b.label]}});
    doc["gluings"] = std::move(gluings);
    json a0 = json::array();
    for (int i = 0; i < system.harmonic.a0.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < system.harmonic.a0.cols(); ++j) row.push_back(system.harmonic.a0(i, j));
        a0.push_back(std::move(row));
    }
    doc["harmonic"]["A0"] = std::move(a0);
    doc["harmonic"]["r"] = system.harmonic.r;
    return doc;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    std::ofstream out = open_out(path);
    out << "k,lambda\n";
    for (int k = 0; k < spectrum.modes(); ++k)
        out << (k + 1) << "," << format_double(spectrum.lambda[k]) << "\n";
}

void write_eigenvectors_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    std::ofstream out = open_out(path);
    out << "vertex_id";
    for (int k = 0; k < spectrum.modes(); ++k) out << ",phi_" << (k + 1);
    out << "\n";
    for (int v = 0; v < spectrum.complex_vertex_count; ++v) {
        out << v;
        for (int k = 0; k < spectrum.modes(); ++k)
            out << "," << format_double(spectrum.value_at(v, k));
        out << "\n";
    }
}

void write_variogram_csv(const std::filesystem::path& path, const VariogramTable& table) {
    std::ofstream out = open_out(path);
    const bool with_se = table.kind == "empirical";
    out << (with_se ? "separation,value,stderr\n" : "separation,value\n");
    for (const VariogramRow& row : table.rows) {
        out << format_double(row.separation) << "," << format_double(row.value);
        if (with_se) out << "," << format_double(row.std_error);
        out << "\n";
    }
}

void write_fit_json(const std::filesystem::path& path, const ExponentFit& fit,
                    const VariogramTable& table, double target_slope) {
    json doc;
    doc["kind"] = table.kind;
    doc["beta"] = table.beta;
    doc["modes"] = table.modes;
    doc["slope"] = fit.slope;
    doc["intercept"] = fit.intercept;
    doc["half_width95"] = fit.half_width95;
    doc["points"] = fit.points;
    doc["window"] = {fit.window_lo, fit.window_hi};
    doc["target_slope"] = target_slope;
    doc["deviation"] = std::abs(fit.slope - target_slope);
    std::ofstream out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_resistance_csv(const std::filesystem::path& path,
                          const std::vector<ResistanceRow>& rows) {
    std::ofstream out = open_out(path);
    out << "x_id,y_id,R\n";
    for (const ResistanceRow& row : rows)
        out << row.x << "," << row.y << "," << format_double(row.value) << "\n";
}

void write_equilibrium_csv(const std::filesystem::path& path, std::span<const double> lambdas,
                           const StationaryNorm& norm, const EquilibriumGapReport& gaps) {
    std::ofstream out = open_out(path);
    out << "k,lambda,stationary_var";
    for (double t : gaps.times) out << ",gap_at_" << format_double(t);
    out << "\n";
    const size_t offset = static_cast<size_t>(norm.skipped_zero_modes);
    for (size_t i = 0; i < norm.per_mode.size(); ++i) {
        out << (i + offset + 1) << "," << format_double(lambdas[i + offset]) << ","
            << format_double(norm.per_mode[i]);
        for (size_t ti = 0; ti < gaps.times.size(); ++ti)
            out << "," << format_double(gaps.per_mode_gap[ti][i]);
        out << "\n";
    }
}

void write_energy_system(const std::filesystem::path& matrix_path,
                         const std::filesystem::path& mass_path, const EnergySystem& system) {
    {
        std::ofstream out = open_out(matrix_path);
        out << "row,col,value\n";
        for (int col = 0; col < system.h.outerSize(); ++col)
            for (SparseMatrix::InnerIterator it(system.h, col); it; ++it)
                out << system.kept[it.row()] << "," << system.kept[col] << ","
                    << format_double(it.value()) << "\n";
    }
    std::ofstream out = open_out(mass_path);
    out << "vertex_id,mass\n";
    for (int i = 0; i < system.dim(); ++i)
        out << system.kept[i] << "," << format_double(system.mass[i]) << "\n";
}

void append_trajectory_csv(std::ostream& out, const FieldSample& sample) {
    for (size_t i = 0; i < sample.vertices.size(); ++i)
        out << format_double(sample.time) << "," << sample.vertices[i] << ","
            << format_double(sample.values[static_cast<int>(i)]) << "\n";
}

} // namespace fractalwave
