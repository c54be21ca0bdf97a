// Batch front-end: parses fractal spec files or presets, runs the
// spectrum -> simulate -> analyze pipelines, and writes CSV/JSON artifacts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fractalwave/equilibrium.hpp"
#include "fractalwave/io.hpp"
#include "fractalwave/report.hpp"
#include "fractalwave/simulate.hpp"
#include "fractalwave/variogram.hpp"

namespace fw = fractalwave;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string preset_name = "interval";
    std::string spec_file;
    double hata_h = 2.0;
    int level = 6;
    std::string boundary = "D";
    double beta = 1.0;
    int modes = 50;
    uint64_t seed = 1;
    std::string out_dir;
    std::string config_file;
};

std::string default_out_dir() {
    const char* env = std::getenv("FRACTALWAVE_OUTDIR");
    return env ? env : ".";
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--preset", opt.preset_name, "built-in fractal (interval, gasket, hata)");
    cmd->add_option("--spec-file", opt.spec_file, "fractal spec file (overrides --preset)");
    cmd->add_option("--hata-h", opt.hata_h, "parameter h of the hata preset");
    cmd->add_option("--level", opt.level, "approximation level n");
    cmd->add_option("--b", opt.boundary, "boundary condition: N, D, or label list");
    cmd->add_option("--beta", opt.beta, "damping coefficient");
    cmd->add_option("--modes", opt.modes, "number of eigenmodes K");
    cmd->add_option("--seed", opt.seed, "RNG seed");
    cmd->add_option("--out-dir", opt.out_dir, "artifact directory (default $FRACTALWAVE_OUTDIR or .)");
    cmd->add_option("--config", opt.config_file, "JSON config; explicit flags override its keys");
}

// config keys mirror the long flags; a flag given on the command line wins
void apply_config(CLI::App* cmd, CommonOptions& opt) {
    if (opt.config_file.empty()) return;
    std::ifstream in(opt.config_file);
    if (!in) throw fw::validation_error("cannot open config file " + opt.config_file);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& err) {
        throw fw::validation_error("config file " + opt.config_file + ": " + err.what());
    }
    const auto absent = [&](const char* flag) {
        const CLI::Option* o = cmd->get_option_no_throw(flag);
        return o != nullptr && o->count() == 0;
    };
    if (doc.contains("preset") && absent("--preset")) opt.preset_name = doc["preset"];
    if (doc.contains("spec_file") && absent("--spec-file")) opt.spec_file = doc["spec_file"];
    if (doc.contains("hata_h") && absent("--hata-h")) opt.hata_h = doc["hata_h"];
    if (doc.contains("level") && absent("--level")) opt.level = doc["level"];
    if (doc.contains("b") && absent("--b")) opt.boundary = doc["b"];
    if (doc.contains("beta") && absent("--beta")) opt.beta = doc["beta"];
    if (doc.contains("modes") && absent("--modes")) opt.modes = doc["modes"];
    if (doc.contains("seed") && absent("--seed")) opt.seed = doc["seed"].get<uint64_t>();
    if (doc.contains("out_dir") && absent("--out-dir")) opt.out_dir = doc["out_dir"];
}

fw::FractalSystem load(const CommonOptions& opt) {
    if (!opt.spec_file.empty()) return fw::load_system_file(opt.spec_file);
    return fw::preset(opt.preset_name, opt.hata_h);
}

struct Built {
    fw::FractalSystem system;
    fw::VertexComplex complex;
    fw::DimensionData dims;
    fw::EnergySystem energy;
};

Built build(const CommonOptions& opt) {
    Built out{load(opt), {}, {}, {}};
    out.dims = fw::dimension_exponents(out.system.harmonic.r);
    out.complex = fw::expand_complex(out.system.spec, opt.level);
    const fw::CellWeights cells =
        fw::cell_table(out.system.spec, out.system.harmonic.r, out.dims.d_hausdorff, opt.level);
    const fw::BoundaryCondition b = fw::BoundaryCondition::parse(opt.boundary, out.system.spec);
    out.energy = fw::reduce_boundary(out.complex,
                                     fw::assemble_energy(out.complex, out.system.harmonic, cells),
                                     fw::assemble_mass(out.complex, cells), b);
    return out;
}

fs::path out_path(const CommonOptions& opt, const std::string& file) {
    const fs::path dir = opt.out_dir.empty() ? fs::path(default_out_dir()) : fs::path(opt.out_dir);
    fs::create_directories(dir);
    return dir / file;
}

std::vector<double> parse_lags(const std::string& text) {
    // "lo:hi:n" log-spaced
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw fw::validation_error("--lags expects lo:hi:count");
    const double lo = std::stod(text.substr(0, c1));
    const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(text.substr(c2 + 1));
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw fw::validation_error("--lags: need 0 < lo < hi, count >= 2");
    std::vector<double> lags(n);
    for (int i = 0; i < n; ++i)
        lags[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return lags;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
    std::vector<std::pair<int, int>> pairs;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        const auto colon = token.find(':');
        if (colon == std::string::npos)
            throw fw::validation_error("--pairs expects idA:idB[,idC:idD...]");
        pairs.emplace_back(std::stoi(token.substr(0, colon)), std::stoi(token.substr(colon + 1)));
    }
    if (pairs.empty()) throw fw::validation_error("--pairs: empty list");
    return pairs;
}

// default spatial pair family: the two non-fixed image points of the deepest
// cell along the first contraction, one pair per scale
std::vector<std::pair<int, int>> default_pairs(const fw::FractalSystem& system, int level) {
    std::vector<std::pair<int, int>> pairs;
    for (int m = 1; m <= level; ++m) {
        const fw::VertexComplex at_m = fw::expand_complex(system.spec, m);
        const fw::Cell& cell = at_m.cells.front();
        if (system.spec.boundary_size() >= 3)
            pairs.emplace_back(cell.vertices[1], cell.vertices[2]);
        else
            pairs.emplace_back(cell.vertices[0], cell.vertices[1]);
    }
    return pairs;
}

int run_validate(const CommonOptions& opt) {
    const fw::FractalSystem system = load(opt);
    const fw::GluingDiagnostics gluing = fw::verify_gluing(system.spec);
    const fw::RenormalizationCheck renorm =
        fw::verify_harmonic_structure(system.spec, system.harmonic);
    const fw::DimensionData dims = fw::dimension_exponents(system.harmonic.r);
    std::cout << "fractal:        " << system.spec.name << "\n"
              << "contractions:   " << system.spec.map_count << "\n"
              << "boundary size:  " << system.spec.boundary_size() << "\n"
              << "gluing pairs:   " << gluing.identifications << "\n"
              << "level-1 size:   " << gluing.level1_vertices << "\n"
              << "connected:      " << (gluing.connected ? "yes" : "no") << "\n"
              << "d_H:            " << fw::format_double(dims.d_hausdorff) << "\n"
              << "d_s:            " << fw::format_double(dims.d_spectral) << "\n"
              << "schur residual: " << fw::format_double(renorm.residual)
              << (renorm.pass ? "  (pass < 1e-10)" : "  (FAIL, tolerance 1e-10)") << "\n";
    return renorm.pass ? 0 : 1;
}

int run_spectrum(const CommonOptions& opt, bool export_energy, const std::string& weyl_window) {
    const Built built = build(opt);
    const fw::Spectrum sp = fw::solve_spectrum(built.energy, opt.modes);
    fw::write_spectrum_csv(out_path(opt, "spectrum.csv"), sp);
    fw::write_eigenvectors_csv(out_path(opt, "eigenvectors.csv"), sp);
    if (export_energy)
        fw::write_energy_system(out_path(opt, "energy.txt"), out_path(opt, "mass.txt"),
                                built.energy);
    std::cout << "dim " << built.energy.dim() << ", modes " << sp.modes() << ", lambda_1 = "
              << fw::format_double(sp.lambda[0]) << "\n";
    if (!weyl_window.empty()) {
        const auto colon = weyl_window.find(':');
        if (colon == std::string::npos) throw fw::validation_error("--weyl-window expects lo:hi");
        const fw::WeylFit fit =
            fw::weyl_diagnostics(sp, built.dims, std::stoi(weyl_window.substr(0, colon)),
                                 std::stoi(weyl_window.substr(colon + 1)));
        std::cout << "weyl slope " << fw::format_double(fit.slope) << ", d_s estimate "
                  << fw::format_double(fit.ds_estimate) << " (target "
                  << fw::format_double(built.dims.d_spectral) << ", deviation "
                  << fw::format_double(fit.ds_deviation) << ")\n";
    }
    return 0;
}

int run_kernel(const CommonOptions& opt, double lambda, double t_max, int samples) {
    const fs::path path = out_path(opt, "kernel.csv");
    std::ofstream out(path);
    if (!out) throw fw::validation_error("cannot open " + path.string());
    out << "t,V,Vdot\n";
    const fw::WaveParams p{opt.beta, lambda};
    for (int i = 0; i <= samples; ++i) {
        const double t = t_max * i / samples;
        out << fw::format_double(t) << "," << fw::format_double(fw::kernel_V(p, t)) << ","
            << fw::format_double(fw::kernel_Vdot(p, t)) << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int run_simulate(const CommonOptions& opt, double t_end, int outputs) {
    if (!(t_end > 0.0) || outputs < 1)
        throw fw::validation_error("simulate: need --t-end > 0 and --outputs >= 1");
    const Built built = build(opt);
    auto sp = std::make_shared<fw::Spectrum>(fw::solve_spectrum(built.energy, opt.modes));
    fw::SimulationState state = fw::init_simulation(sp, opt.beta, opt.modes, opt.seed);
    std::vector<int> ids(built.complex.vertex_count);
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);

    const fs::path path = out_path(opt, "trajectory.csv");
    std::ofstream out(path);
    if (!out) throw fw::validation_error("cannot open " + path.string());
    out << "t,vertex_id,u\n";
    const double h = t_end / outputs;
    const fw::TransitionTable table = fw::transition_table(*sp, opt.beta, opt.modes, h);
    for (int step = 0; step < outputs; ++step) {
        fw::advance(state, table);
        fw::append_trajectory_csv(out, fw::field_at(state, ids));
    }
    std::cout << "wrote " << path.string() << " (" << outputs << " output times, "
              << built.complex.vertex_count << " vertices)\n";
    return 0;
}

int run_variogram(const CommonOptions& opt, const std::string& kind, double base_time,
                  const std::string& lag_spec, int site, const std::string& pair_spec,
                  const std::string& window) {
    const Built built = build(opt);
    const fw::Spectrum sp = fw::solve_spectrum(built.energy, built.energy.dim());
    const int modes = std::min(opt.modes, sp.modes());
    fw::VariogramTable table;
    double target = 1.0;
    if (kind == "spatial") {
        const std::vector<std::pair<int, int>> pairs =
            pair_spec.empty() ? default_pairs(built.system, opt.level) : parse_pairs(pair_spec);
        const fw::BoundaryCondition neumann = fw::BoundaryCondition::neumann(built.system.spec);
        const fw::CellWeights cells = fw::cell_table(
            built.system.spec, built.system.harmonic.r, built.dims.d_hausdorff, opt.level);
        const fw::ResistanceSolver solver(fw::reduce_boundary(
            built.complex, fw::assemble_energy(built.complex, built.system.harmonic, cells),
            fw::assemble_mass(built.complex, cells), neumann));
        std::vector<double> seps;
        seps.reserve(pairs.size());
        for (const auto& [x, y] : pairs) seps.push_back(solver.resistance(x, y));
        table = fw::spatial_variogram_exact(sp, opt.beta, base_time, pairs, modes, seps);
        target = 1.0;
    } else if (kind == "temporal" || kind == "l2") {
        const std::vector<double> lags =
            parse_lags(lag_spec.empty() ? "1e-3:1e-1:17" : lag_spec);
        if (kind == "temporal") {
            const int use_site = site >= 0 ? site : built.complex.boundary_ids.size();
            table = fw::temporal_variogram_exact(sp, opt.beta, use_site, base_time, lags, modes);
        } else {
            const std::vector<double> lambdas(sp.lambda.data(), sp.lambda.data() + sp.modes());
            table = fw::l2_modulus_exact(lambdas, opt.beta, base_time, lags, modes);
        }
        target = 2.0 - built.dims.d_spectral;
    } else {
        throw fw::validation_error("variogram kind must be spatial, temporal, or l2");
    }
    fw::write_variogram_csv(out_path(opt, "variogram.csv"), table);

    double lo = 0.0, hi = 1e300;
    if (!window.empty()) {
        const auto colon = window.find(':');
        if (colon == std::string::npos) throw fw::validation_error("--window expects lo:hi");
        lo = std::stod(window.substr(0, colon));
        hi = std::stod(window.substr(colon + 1));
    } else if (kind != "spatial") {
        lo = fw::resolution_separation(sp.lambda[modes - 1]); // truncation resolution
    }
    const fw::ExponentFit fit = fw::fit_exponent(table, lo, hi);
    fw::write_fit_json(out_path(opt, "fit.json"), fit, table, target);
    std::cout << "slope " << fw::format_double(fit.slope) << " +- "
              << fw::format_double(fit.half_width95) << " over [" << fw::format_double(fit.window_lo)
              << ", " << fw::format_double(fit.window_hi) << "] (" << fit.points
              << " rows); reference exponent " << fw::format_double(target) << "\n";
    return 0;
}

int run_equilibrium(const CommonOptions& opt, const std::vector<double>& times) {
    const Built built = build(opt);
    const fw::Spectrum sp = fw::solve_spectrum(built.energy, opt.modes);
    const std::vector<double> lambdas(sp.lambda.data(), sp.lambda.data() + sp.modes());
    const bool neumann =
        built.energy.b.is_neumann(built.system.spec.boundary_size());
    const fw::StationaryNorm norm = fw::stationary_norm(lambdas, opt.beta, neumann);
    std::vector<double> positive(lambdas.begin() + norm.skipped_zero_modes, lambdas.end());
    const fw::EquilibriumGapReport gaps = fw::equilibrium_gap(positive, opt.beta, times);
    fw::write_equilibrium_csv(out_path(opt, "equilibrium.csv"), lambdas, norm, gaps);

    json summary;
    summary["beta"] = opt.beta;
    summary["modes"] = opt.modes;
    summary["stationary_total"] = norm.total;
    summary["skipped_zero_modes"] = norm.skipped_zero_modes;
    if (norm.skipped_zero_modes > 0) summary["zero_mode_rate"] = norm.zero_mode_rate;
    if (norm.weyl_tail_valid) summary["weyl_tail_diagnostic"] = norm.weyl_tail;
    summary["times"] = times;
    summary["total_gap"] = gaps.total_gap;
    summary["gap_bound"] = gaps.bound;
    std::ofstream out(out_path(opt, "equilibrium_summary.json"));
    out << summary.dump(2) << "\n";
    std::cout << "stationary total " << fw::format_double(norm.total) << " over "
              << norm.per_mode.size() << " modes\n";
    return 0;
}

int run_report(const CommonOptions& opt, const std::string& scope_text) {
    fw::AcceptanceContext context;
    const fw::ReportScope scope = fw::parse_scope(scope_text);
    const std::vector<fw::CriterionResult> results = fw::run_acceptance(scope, context);
    json doc = json::array();
    int failures = 0;
    for (const fw::CriterionResult& r : results) {
        std::printf("[%s] %02d %-32s %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        doc.push_back({{"id", r.id},
                       {"name", r.name},
                       {"passed", r.passed},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
        if (!r.passed) ++failures;
    }
    std::ofstream out(out_path(opt, "report.json"));
    out << doc.dump(2) << "\n";
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped stochastic wave equation on p.c.f. self-similar fractals"};
    app.require_subcommand(1);

    CommonOptions opt;

    CLI::App* validate = app.add_subcommand("validate", "check a fractal spec and its harmonic structure");
    add_common(validate, opt);

    CLI::App* spectrum = app.add_subcommand("spectrum", "solve the eigenproblem and export CSV");
    add_common(spectrum, opt);
    bool export_energy = false;
    std::string weyl_window;
    spectrum->add_flag("--export-energy", export_energy, "also write energy.txt/mass.txt");
    spectrum->add_option("--weyl-window", weyl_window, "fit log lambda_k vs log k over k in lo:hi");

    CLI::App* kernel = app.add_subcommand("kernel", "tabulate V and Vdot for one mode");
    add_common(kernel, opt);
    double lambda = 1.0, t_max = 10.0;
    int samples = 200;
    kernel->add_option("--lambda", lambda, "mode eigenvalue");
    kernel->add_option("--t-max", t_max, "table end time");
    kernel->add_option("--samples", samples, "table rows");

    CLI::App* simulate = app.add_subcommand("simulate", "sample a trajectory of the truncated field");
    add_common(simulate, opt);
    double t_end = 2.0;
    int outputs = 8;
    simulate->add_option("--t-end", t_end, "final time");
    simulate->add_option("--outputs", outputs, "number of equally spaced output times");

    CLI::App* variogram = app.add_subcommand("variogram", "exact variogram tables and exponent fits");
    add_common(variogram, opt);
    std::string kind = "temporal", lag_spec, pair_spec, window;
    double base_time = 2.0;
    int site = -1;
    variogram->add_option("--kind", kind, "spatial, temporal, or l2");
    variogram->add_option("--t", base_time, "field time (spatial) / start time s (temporal, l2)");
    variogram->add_option("--lags", lag_spec, "lo:hi:count, log-spaced");
    variogram->add_option("--site", site, "vertex id for temporal variograms");
    variogram->add_option("--pairs", pair_spec, "vertex id pairs idA:idB,...");
    variogram->add_option("--window", window, "fit window lo:hi (default: truncation-resolution rule)");

    CLI::App* equilibrium = app.add_subcommand("equilibrium", "stationary variances and gaps");
    add_common(equilibrium, opt);
    std::vector<double> times{1.0, 2.0, 5.0};
    equilibrium->add_option("--times", times, "gap evaluation times");

    CLI::App* report = app.add_subcommand("report", "run the acceptance pipeline");
    add_common(report, opt);
    std::string scope = "all";
    report->add_option("--scope", scope, "all, interval, gasket, or hata");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        apply_config(active, opt);
        if (active == validate) return run_validate(opt);
        if (active == spectrum) return run_spectrum(opt, export_energy, weyl_window);
        if (active == kernel) return run_kernel(opt, lambda, t_max, samples);
        if (active == simulate) return run_simulate(opt, t_end, outputs);
        if (active == variogram)
            return run_variogram(opt, kind, base_time, lag_spec, site, pair_spec, window);
        if (active == equilibrium) return run_equilibrium(opt, times);
        if (active == report) return run_report(opt, scope);
    } catch (const fw::validation_error& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
