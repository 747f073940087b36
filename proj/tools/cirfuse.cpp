// cirfuse: simulate, calibrate, and estimate breathing rate from UWB CIR
// snapshot recordings.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical
// degeneracy in all windows.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "cirfuse/calib.hpp"
#include "cirfuse/io.hpp"
#include "cirfuse/pipeline.hpp"
#include "cirfuse/presets.hpp"

using namespace cirfuse;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EstimateFlags {
    WindowConfig window;
    CalibrationConfig calib;
    std::string band = "0.1:0.5";
    std::string convention = "paper";
    std::string csv_path;
    std::string summary_path;
};

void add_estimate_flags(CLI::App* cmd, EstimateFlags& f) {
    cmd->add_option("--window", f.window.window_snapshots, "window length in snapshots")
        ->capture_default_str();
    cmd->add_option("--hop", f.window.hop_snapshots, "hop between windows in snapshots")
        ->capture_default_str();
    cmd->add_option("--rate", f.window.nominal_rate_hz, "nominal snapshot rate in Hz")
        ->capture_default_str();
    cmd->add_option("--resolution", f.window.resolution_hz, "PSD grid resolution in Hz")
        ->capture_default_str();
    cmd->add_option("--band", f.band, "band of interest as low:high in Hz")
        ->capture_default_str();
    cmd->add_option("--rank-tol", f.window.rank_tol, "relative rank tolerance for B whitening")
        ->capture_default_str();
    cmd->add_option("--convention", f.convention, "window count convention: paper or full")
        ->capture_default_str();
    cmd->add_option("--search-start", f.calib.search_start_bin,
                    "first bin of the reference peak search")
        ->capture_default_str();
    cmd->add_option("--ref-bin", f.calib.target_ref_bin, "target reference bin after alignment")
        ->capture_default_str();
    cmd->add_option("--ref-radius", f.calib.neighbor_radius, "reference window radius in bins")
        ->capture_default_str();
    cmd->add_option("--ref-energy", f.calib.target_ref_energy, "target reference window energy")
        ->capture_default_str();
    cmd->add_option("--csv", f.csv_path, "write the per-window report CSV here");
    cmd->add_option("--summary", f.summary_path, "write the summary JSON here");
}

WindowConfig resolve_window(const EstimateFlags& f) {
    WindowConfig cfg = f.window;
    double lo = 0.0;
    double hi = 0.0;
    if (std::sscanf(f.band.c_str(), "%lf:%lf", &lo, &hi) != 2) {
        throw ConfigError("--band must look like 0.1:0.5");
    }
    cfg.band = BandOfInterest{lo, hi};
    if (f.convention == "paper") {
        cfg.count_convention = WindowCountConvention::paper;
    } else if (f.convention == "full") {
        cfg.count_convention = WindowCountConvention::full;
    } else {
        throw ConfigError("--convention must be 'paper' or 'full'");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

CirRecording load_recording_or_die(const std::string& path) {
    try {
        return read_recording(std::filesystem::path(path));
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

Scenario resolve_scenario(const std::string& scenario_path, const std::string& preset,
                          std::uint64_t seed, bool seed_given) {
    if (scenario_path.empty() == preset.empty()) {
        throw ConfigError("give exactly one of --scenario or --preset");
    }
    if (!preset.empty()) {
        std::optional<Scenario> s = preset_by_name(preset, seed);
        if (!s) throw ConfigError("unknown preset '" + preset + "'");
        return *s;
    }
    try {
        Scenario s = load_scenario(scenario_path);
        if (seed_given) s.seed = seed;
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::runtime_error& e) {
        throw DataError(e.what());
    }
}

void emit_report(const ScenarioReport& rep, const WindowConfig& cfg,
                 const CalibrationConfig& ccfg, const EstimateFlags& flags) {
    std::size_t failed = 0;
    for (const BreathingEstimate& e : rep.estimates) {
        if (!e.ok) ++failed;
    }
    if (!rep.estimates.empty() && failed == rep.estimates.size()) {
        throw DegenerateWindow("every window was numerically degenerate");
    }
    if (!flags.csv_path.empty()) {
        std::ofstream os(flags.csv_path);
        if (!os) throw DataError("cannot write " + flags.csv_path);
        write_report_csv(os, rep);
    }
    nlohmann::json j = summary_json(rep, cfg, ccfg);
    if (!flags.summary_path.empty()) {
        std::ofstream os(flags.summary_path);
        if (!os) throw DataError("cannot write " + flags.summary_path);
        os << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << "\n";
}

ScenarioReport run_or_die(const CirRecording& rec, const WindowConfig& cfg,
                          const CalibrationConfig& ccfg) {
    try {
        return run_recording(rec, cfg, ccfg);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    } catch (const std::runtime_error& e) {
        throw DataError(e.what());
    }
}

// ---- sweep -----------------------------------------------------------

struct SweepCase {
    std::string preset;  // "los" or "spread"
    double displacement_mm = 0.0;
};

std::string format_cell(const std::vector<double>& sel, const std::vector<double>& fus) {
    if (sel.empty()) return "err / err";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f / %.3f", median(sel), median(fus));
    return buf;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
    nlohmann::json spec;
    {
        std::ifstream is(spec_path);
        if (!is) throw DataError("cannot open: " + spec_path);
        try {
            is >> spec;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("sweep spec: ") + e.what());
        }
    }

    std::vector<double> displacements;
    std::vector<std::string> presets;
    std::vector<std::uint64_t> seeds;
    double rate_hz = 0.3;
    int hop = 55;
    try {
        for (const auto& d : spec.at("displacements_mm")) displacements.push_back(d.get<double>());
        for (const auto& p : spec.at("presets")) presets.push_back(p.get<std::string>());
        if (spec.contains("seeds")) {
            for (const auto& s : spec.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
        }
        if (spec.contains("rate_hz")) rate_hz = spec.at("rate_hz").get<double>();
        if (spec.contains("hop")) hop = spec.at("hop").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep spec: ") + e.what());
    }
    if (seeds.empty()) seeds = {1, 2, 3};
    if (displacements.empty() || presets.empty()) throw ConfigError("sweep: no cases");

    WindowConfig cfg;
    cfg.hop_snapshots = hop;
    cfg.validate();

    std::string table = "| D (mm) |";
    for (const std::string& p : presets) table += " " + p + " Sel. / Fus. |";
    table += "\n|---|";
    for (std::size_t i = 0; i < presets.size(); ++i) table += "---|";
    table += "\n";

    for (double d : displacements) {
        char row[64];
        std::snprintf(row, sizeof(row), "| %g |", d);
        table += row;
        for (const std::string& p : presets) {
            std::vector<double> sel_meds;
            std::vector<double> fus_meds;
            for (std::uint64_t seed : seeds) {
                char name[64];
                std::snprintf(name, sizeof(name), "%s-%gmm-%ghz", p.c_str(), d, rate_hz);
                std::optional<Scenario> s = preset_by_name(name, seed);
                if (!s) throw ConfigError(std::string("sweep: unknown preset '") + p + "'");
                try {
                    auto [sel, fus] = compare_methods(simulate(*s), cfg, CalibrationConfig{});
                    sel_meds.push_back(sel.median_abs_error_hz);
                    fus_meds.push_back(fus.median_abs_error_hz);
                } catch (const std::exception&) {
                    // partial failure: leave the cell marked and keep sweeping
                }
            }
            table += " " + format_cell(sel_meds, fus_meds) + " |";
        }
        table += "\n";
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream os(std::filesystem::path(out_dir) / "sweep.md");
        if (!os) throw DataError("cannot write sweep table in " + out_dir);
        os << table;
    }
    std::cout << table;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"breathing-rate estimation from UWB CIR snapshot sequences"};
    app.require_subcommand(1);

    // simulate
    std::string sim_scenario;
    std::string sim_preset;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    CLI::App* sim = app.add_subcommand("simulate", "synthesize a CIR recording");
    sim->add_option("--scenario", sim_scenario, "scenario JSON file");
    sim->add_option("--preset", sim_preset, "preset name, e.g. los-2mm-0.3hz");
    CLI::Option* sim_seed_opt = sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("-o,--out", sim_out, "output recording file")->required();

    // calibrate
    std::string cal_in;
    std::string cal_out;
    CalibrationConfig cal_cfg;
    CLI::App* cal = app.add_subcommand("calibrate", "delay- and amplitude-calibrate a recording");
    cal->add_option("-i,--in", cal_in, "input recording")->required();
    cal->add_option("-o,--out", cal_out, "output recording")->required();
    cal->add_option("--search-start", cal_cfg.search_start_bin,
                    "first bin of the reference peak search")->capture_default_str();
    cal->add_option("--ref-bin", cal_cfg.target_ref_bin, "target reference bin")
        ->capture_default_str();
    cal->add_option("--ref-radius", cal_cfg.neighbor_radius, "reference window radius")
        ->capture_default_str();
    cal->add_option("--ref-energy", cal_cfg.target_ref_energy, "target reference energy")
        ->capture_default_str();

    // estimate
    std::string est_in;
    std::string est_method = "fusion";
    EstimateFlags est_flags;
    CLI::App* est = app.add_subcommand("estimate", "estimate breathing rate per window");
    est->add_option("-i,--in", est_in, "input recording")->required();
    est->add_option("--method", est_method, "selection or fusion")->capture_default_str();
    add_estimate_flags(est, est_flags);

    // compare
    std::string cmp_in;
    EstimateFlags cmp_flags;
    CLI::App* cmp = app.add_subcommand("compare", "run both methods on identical windows");
    cmp->add_option("-i,--in", cmp_in, "input recording")->required();
    add_estimate_flags(cmp, cmp_flags);

    // sweep
    std::string sweep_spec;
    std::string sweep_out;
    CLI::App* swp = app.add_subcommand("sweep", "median-error table across presets");
    swp->add_option("--spec", sweep_spec, "sweep spec JSON")->required();
    swp->add_option("-o,--out", sweep_out, "output directory for the markdown table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (sim->parsed()) {
            Scenario s = resolve_scenario(sim_scenario, sim_preset, sim_seed,
                                          sim_seed_opt->count() > 0);
            CirRecording rec = simulate(s);
            write_recording(std::filesystem::path(sim_out), rec);
            std::printf("wrote %zu snapshots to %s", rec.snapshots.size(), sim_out.c_str());
            if (rec.meta.ground_truth_hz) {
                std::printf(" (ground truth %.3f Hz)", *rec.meta.ground_truth_hz);
            }
            std::printf("\n");
            return 0;
        }
        if (cal->parsed()) {
            CirRecording rec = load_recording_or_die(cal_in);
            CirRecording out;
            try {
                out = calibrate(rec, cal_cfg);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            } catch (const std::runtime_error& e) {
                throw DataError(e.what());
            }
            write_recording(std::filesystem::path(cal_out), out);
            std::printf("wrote %zu calibrated snapshots to %s\n", out.snapshots.size(),
                        cal_out.c_str());
            return 0;
        }
        if (est->parsed()) {
            WindowConfig cfg = resolve_window(est_flags);
            if (est_method == "selection") {
                cfg.method = Method::selection;
            } else if (est_method == "fusion") {
                cfg.method = Method::fusion;
            } else {
                throw ConfigError("--method must be 'selection' or 'fusion'");
            }
            CirRecording rec = load_recording_or_die(est_in);
            ScenarioReport rep = run_or_die(rec, cfg, est_flags.calib);
            emit_report(rep, cfg, est_flags.calib, est_flags);
            return 0;
        }
        if (cmp->parsed()) {
            WindowConfig cfg = resolve_window(cmp_flags);
            CirRecording rec = load_recording_or_die(cmp_in);
            std::pair<ScenarioReport, ScenarioReport> both;
            try {
                both = compare_methods(rec, cfg, cmp_flags.calib);
            } catch (const std::exception& e) {
                throw DataError(e.what());
            }
            EstimateFlags sel_flags = cmp_flags;
            if (!sel_flags.csv_path.empty()) sel_flags.csv_path += ".selection";
            if (!sel_flags.summary_path.empty()) sel_flags.summary_path += ".selection";
            WindowConfig sel_cfg = cfg;
            sel_cfg.method = Method::selection;
            emit_report(both.first, sel_cfg, cmp_flags.calib, sel_flags);
            WindowConfig fus_cfg = cfg;
            fus_cfg.method = Method::fusion;
            emit_report(both.second, fus_cfg, cmp_flags.calib, cmp_flags);
            return 0;
        }
        if (swp->parsed()) {
            return cmd_sweep(sweep_spec, sweep_out);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const DegenerateWindow& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDegenerate;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return 0;
}
