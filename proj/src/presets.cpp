#include "fractalwave/presets.hpp"

#include <json.hpp>

#include "fractalwave/io.hpp"

namespace fractalwave {

namespace {

// Unit interval as a self-similar set: two halves glued at the midpoint.
// A0 is the two-point unit conductor; r = (1/2, 1/2) renormalizes it.
const char* kIntervalJson = R"json({
  "name": "interval",
  "M": 2,
  "boundary": ["0", "1"],
  "images": [
    {"0": "0", "1": "mid"},
    {"0": "mid", "1": "1"}
  ],
  "gluings": [[[1, "1"], [2, "0"]]],
  "harmonic": {
    "A0": [[-1.0, 1.0], [1.0, -1.0]],
    "r": [0.5, 0.5]
  },
  "embedding": {
    "dim": 1,
    "maps": [
      {"A": [[0.5]], "b": [0.0]},
      {"A": [[0.5]], "b": [0.5]}
    ],
    "boundary": [[0.0], [1.0]]
  }
})json";

// Sierpinski gasket: three corner-fixing contractions, cell midpoints glued
// pairwise, complete-graph boundary energy, r = 3/5 per cell.
const char* kGasketJson = R"json({
  "name": "gasket",
  "M": 3,
  "boundary": ["p1", "p2", "p3"],
  "images": [
    {"p1": "p1", "p2": "m12", "p3": "m13"},
    {"p1": "m12", "p2": "p2", "p3": "m23"},
    {"p1": "m13", "p2": "m23", "p3": "p3"}
  ],
  "gluings": [
    [[1, "p2"], [2, "p1"]],
    [[1, "p3"], [3, "p1"]],
    [[2, "p3"], [3, "p2"]]
  ],
  "harmonic": {
    "A0": [[-2.0, 1.0, 1.0], [1.0, -2.0, 1.0], [1.0, 1.0, -2.0]],
    "r": [0.6, 0.6, 0.6]
  },
  "embedding": {
    "dim": 2,
    "maps": [
      {"A": [[0.5, 0.0], [0.0, 0.5]], "b": [0.0, 0.0]},
      {"A": [[0.5, 0.0], [0.0, 0.5]], "b": [0.5, 0.0]},
      {"A": [[0.5, 0.0], [0.0, 0.5]], "b": [0.25, 0.4330127018922193]}
    ],
    "boundary": [[0.0, 0.0], [1.0, 0.0], [0.5, 0.8660254037844386]]
  }
})json";

} // namespace

std::string preset_json(const std::string& name, double hata_h) {
    if (name == "interval") return kIntervalJson;
    if (name == "gasket") return kGasketJson;
    if (name == "hata") {
        // Hata's tree-like set with boundary {c, 0, 1}. The two copies meet at
        // psi_1(c) = psi_2(0); the printed harmonic family is
        // A0(h), r = (1/h, 1 - 1/h^2) for h > 1.
        if (!(hata_h > 1.0)) throw validation_error("hata preset: parameter h must be > 1");
        nlohmann::json doc;
        doc["name"] = "hata";
        doc["M"] = 2;
        doc["boundary"] = {"c", "0", "1"};
        doc["images"] = nlohmann::json::array(
            {{{"c", "knee"}, {"0", "0"}, {"1", "c"}},
             {{"c", "tip"}, {"0", "knee"}, {"1", "1"}}});
        doc["gluings"] = nlohmann::json::array({{{1, "c"}, {2, "0"}}});
        const double h = hata_h;
        doc["harmonic"]["A0"] = {{-h, h, 0.0}, {h, -(h + 1.0), 1.0}, {0.0, 1.0, -1.0}};
        doc["harmonic"]["r"] = {1.0 / h, 1.0 - 1.0 / (h * h)};
        return doc.dump(2);
    }
    throw validation_error("unknown preset '" + name + "' (have: interval, gasket, hata)");
}

FractalSystem preset(const std::string& name, double hata_h) {
    return parse_system(nlohmann::json::parse(preset_json(name, hata_h)));
}

std::vector<std::string> preset_names() { return {"interval", "gasket", "hata"}; }

} // namespace fractalwave
