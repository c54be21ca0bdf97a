#pragma once

#include <string>
#include <vector>

#include "fractalwave/fractal_spec.hpp"
#include "fractalwave/harmonic.hpp"

namespace fractalwave {

struct FractalSystem {
    FractalSpec spec;
    HarmonicStructure harmonic;
};

/// Built-in systems: "interval", "gasket", "hata" (Hata tree, parameter h).
FractalSystem preset(const std::string& name, double hata_h = 2.0);

std::vector<std::string> preset_names();

/// The built-in preset serialized in the spec-file schema; the shipped
/// presets/*.json files carry exactly this content.
std::string preset_json(const std::string& name, double hata_h = 2.0);

} // namespace fractalwave
