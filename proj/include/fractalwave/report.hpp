#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fractalwave/presets.hpp"
#include "fractalwave/spectrum.hpp"

namespace fractalwave {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Restricts preset-specific parts of the suite; kernel-level criteria run in
/// every scope.
enum class ReportScope { all, interval, gasket, hata };

ReportScope parse_scope(const std::string& text);

/// Shared solves across criteria: spectra are computed once per
/// (preset, level, boundary) and sliced by the criteria that need them.
class AcceptanceContext {
  public:
    const FractalSystem& system(const std::string& preset_name);
    const VertexComplex& complex(const std::string& preset_name, int level);
    DimensionData dimensions(const std::string& preset_name);
    EnergySystem energy(const std::string& preset_name, int level, const BoundaryCondition& b);
    std::shared_ptr<const Spectrum> spectrum(const std::string& preset_name, int level,
                                             const BoundaryCondition& b);

  private:
    std::map<std::string, FractalSystem> systems_;
    std::map<std::string, VertexComplex> complexes_;
    std::map<std::string, std::shared_ptr<const Spectrum>> spectra_;
};

/// Runs the acceptance criteria (all 14, or the subset touching the scoped
/// preset plus the preset-independent ones). Each result carries the measured
/// quantities in `detail`.
std::vector<CriterionResult> run_acceptance(ReportScope scope, AcceptanceContext& context);

/// Single criterion by id (1-14); throws validation_error for unknown ids.
CriterionResult run_criterion(int id, ReportScope scope, AcceptanceContext& context);

/// ids applicable to a scope, ascending.
std::vector<int> criteria_for_scope(ReportScope scope);

} // namespace fractalwave
