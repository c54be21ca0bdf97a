#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fractalwave/equilibrium.hpp"
#include "fractalwave/presets.hpp"
#include "fractalwave/simulate.hpp"
#include "fractalwave/spectrum.hpp"
#include "fractalwave/variogram.hpp"

namespace fractalwave {

/// Shortest decimal round-trip representation; keeps artifacts byte-stable.
std::string format_double(double value);

/// Parse a fractal system from the spec-file schema (keys: M, boundary,
/// images, gluings, harmonic.A0, harmonic.r, optional embedding, name).
FractalSystem parse_system(const nlohmann::json& doc);
FractalSystem load_system_file(const std::filesystem::path& path);
nlohmann::json system_to_json(const FractalSystem& system);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
/// Eigenvector matrix keyed by complex vertex id: header k columns, one row
/// per vertex; pinned vertices appear with zeros.
void write_eigenvectors_csv(const std::filesystem::path& path, const Spectrum& spectrum);
void write_variogram_csv(const std::filesystem::path& path, const VariogramTable& table);
void write_fit_json(const std::filesystem::path& path, const ExponentFit& fit,
                    const VariogramTable& table, double target_slope);
void write_resistance_csv(const std::filesystem::path& path,
                          const std::vector<ResistanceRow>& rows);
void write_equilibrium_csv(const std::filesystem::path& path,
                           std::span<const double> lambdas, const StationaryNorm& norm,
                           const EquilibriumGapReport& gaps);
/// Coordinate-format sparse export of the energy matrix plus the mass vector.
void write_energy_system(const std::filesystem::path& matrix_path,
                         const std::filesystem::path& mass_path, const EnergySystem& system);
/// Long-format trajectory rows t,vertex_id,u appended per sample.
void append_trajectory_csv(std::ostream& out, const FieldSample& sample);

} // namespace fractalwave
