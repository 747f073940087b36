#include "cirfuse/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cirfuse {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw std::invalid_argument("scenario: unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

CirRecording simulate(const Scenario& scenario) {
    CirRecording rec = generate_recording(scenario.channel, scenario.motion, scenario.artifacts,
                                          scenario.duration_s, scenario.nominal_rate_hz,
                                          scenario.seed);
    rec.meta.label = scenario.label;
    return rec;
}

void write_recording(std::ostream& os, const CirRecording& recording) {
    std::string label = recording.meta.label.empty() ? "-" : recording.meta.label;
    for (char& c : label) {
        if (c == ' ' || c == '\t' || c == '\n') c = '_';
    }
    os << "cirrec v1 bins=" << recording.meta.n_bins << " rate=" << fmt17(recording.nominal_rate_hz)
       << " bandwidth=" << fmt17(recording.meta.bandwidth_hz)
       << " carrier=" << fmt17(recording.meta.carrier_hz) << " truth="
       << (recording.meta.ground_truth_hz ? fmt17(*recording.meta.ground_truth_hz)
                                          : std::string("none"))
       << " label=" << label << "\n";
    for (const CirSnapshot& snap : recording.snapshots) {
        os << fmt17(snap.timestamp_s);
        for (const cplx& b : snap.bins) {
            os << ' ' << fmt17(b.real()) << ' ' << fmt17(b.imag());
        }
        os << "\n";
    }
}

void write_recording(const std::filesystem::path& path, const CirRecording& recording) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    write_recording(os, recording);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

CirRecording read_recording(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("recording: empty input");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "cirrec" || version != "v1") {
        throw std::runtime_error("recording: bad header (expected 'cirrec v1')");
    }

    CirRecording rec;
    std::string token;
    int bins = -1;
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw std::runtime_error("recording: malformed header token");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "bins") {
            bins = std::stoi(value);
        } else if (key == "rate") {
            rec.nominal_rate_hz = std::stod(value);
        } else if (key == "bandwidth") {
            rec.meta.bandwidth_hz = std::stod(value);
        } else if (key == "carrier") {
            rec.meta.carrier_hz = std::stod(value);
        } else if (key == "truth") {
            if (value != "none") rec.meta.ground_truth_hz = std::stod(value);
        } else if (key == "label") {
            if (value != "-") rec.meta.label = value;
        } else {
            throw std::runtime_error("recording: unknown header key '" + key + "'");
        }
    }
    if (bins <= 0) throw std::runtime_error("recording: missing or invalid bin count");
    rec.meta.n_bins = bins;

    std::string line;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        CirSnapshot snap;
        if (!(ls >> snap.timestamp_s)) {
            throw std::runtime_error("recording: bad timestamp at line " + std::to_string(lineno));
        }
        snap.bins.reserve(static_cast<std::size_t>(bins));
        double re = 0.0, im = 0.0;
        for (int b = 0; b < bins; ++b) {
            if (!(ls >> re >> im)) {
                throw std::runtime_error("recording: truncated snapshot at line " +
                                         std::to_string(lineno));
            }
            snap.bins.emplace_back(re, im);
        }
        if (ls >> re) {
            throw std::runtime_error("recording: trailing values at line " + std::to_string(lineno));
        }
        if (!rec.snapshots.empty() && snap.timestamp_s <= rec.snapshots.back().timestamp_s) {
            throw std::runtime_error("recording: timestamps not strictly increasing at line " +
                                     std::to_string(lineno));
        }
        rec.snapshots.push_back(std::move(snap));
    }
    return rec;
}

CirRecording read_recording(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    return read_recording(is);
}

Scenario scenario_from_json(const json& j) {
    check_keys(j, "scenario",
               {"channel", "motion", "artifacts", "duration_s", "nominal_rate_hz", "seed", "label"});
    Scenario s;

    const json& jc = j.at("channel");
    check_keys(jc, "channel", {"bandwidth_hz", "carrier_hz", "n_bins", "reference_bin", "paths"});
    s.channel.bandwidth_hz = jc.at("bandwidth_hz").get<double>();
    s.channel.carrier_hz = jc.at("carrier_hz").get<double>();
    s.channel.n_bins = jc.at("n_bins").get<int>();
    if (jc.contains("reference_bin")) s.channel.reference_bin = jc.at("reference_bin").get<int>();
    s.channel.paths.clear();
    for (const json& jp : jc.at("paths")) {
        check_keys(jp, "path", {"attenuation", "base_delay_s", "breathing_coupling"});
        PathSpec p;
        const json& att = jp.at("attenuation");
        if (!att.is_array() || att.size() != 2) {
            throw std::invalid_argument("scenario: path attenuation must be [re, im]");
        }
        p.attenuation = cplx{att[0].get<double>(), att[1].get<double>()};
        p.base_delay_s = jp.at("base_delay_s").get<double>();
        if (jp.contains("breathing_coupling")) {
            p.breathing_coupling = jp.at("breathing_coupling").get<double>();
        }
        s.channel.paths.push_back(p);
    }

    const json& jm = j.at("motion");
    check_keys(jm, "motion", {"waveform", "displacement_m", "rate_hz", "speed_m_s"});
    const std::string waveform = jm.at("waveform").get<std::string>();
    const double displacement = jm.at("displacement_m").get<double>();
    if (jm.contains("rate_hz") == jm.contains("speed_m_s")) {
        throw std::invalid_argument("scenario: motion needs exactly one of rate_hz / speed_m_s");
    }
    if (waveform == "sinusoid") {
        if (!jm.contains("rate_hz")) {
            throw std::invalid_argument("scenario: sinusoid motion requires rate_hz");
        }
        s.motion.waveform = Waveform::sinusoid;
        s.motion.displacement_m = displacement;
        s.motion.rate_hz = jm.at("rate_hz").get<double>();
    } else if (waveform == "triangular") {
        if (jm.contains("speed_m_s")) {
            s.motion = EmulatorMotion::triangular_from_speed(displacement,
                                                             jm.at("speed_m_s").get<double>());
        } else {
            s.motion.waveform = Waveform::triangular;
            s.motion.displacement_m = displacement;
            s.motion.rate_hz = jm.at("rate_hz").get<double>();
        }
    } else {
        throw std::invalid_argument("scenario: unknown waveform '" + waveform + "'");
    }

    if (j.contains("artifacts")) {
        const json& ja = j.at("artifacts");
        check_keys(ja, "artifacts",
                   {"gain_mag", "gain_phase", "delay_shift", "jitter_std_s", "noise_std"});
        auto range = [](const json& v, const char* what) -> std::pair<double, double> {
            if (!v.is_array() || v.size() != 2) {
                throw std::invalid_argument(std::string("scenario: ") + what + " must be [lo, hi]");
            }
            return {v[0].get<double>(), v[1].get<double>()};
        };
        if (ja.contains("gain_mag")) {
            std::tie(s.artifacts.gain_mag_lo, s.artifacts.gain_mag_hi) =
                range(ja.at("gain_mag"), "gain_mag");
        }
        if (ja.contains("gain_phase")) {
            std::tie(s.artifacts.gain_phase_lo, s.artifacts.gain_phase_hi) =
                range(ja.at("gain_phase"), "gain_phase");
        }
        if (ja.contains("delay_shift")) {
            const json& v = ja.at("delay_shift");
            if (!v.is_array() || v.size() != 2) {
                throw std::invalid_argument("scenario: delay_shift must be [lo, hi]");
            }
            s.artifacts.shift_lo = v[0].get<int>();
            s.artifacts.shift_hi = v[1].get<int>();
        }
        if (ja.contains("jitter_std_s")) s.artifacts.jitter_std_s = ja.at("jitter_std_s").get<double>();
        if (ja.contains("noise_std")) s.artifacts.noise_std = ja.at("noise_std").get<double>();
    }

    s.duration_s = j.at("duration_s").get<double>();
    s.nominal_rate_hz = j.at("nominal_rate_hz").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("label")) s.label = j.at("label").get<std::string>();
    s.channel.validate();
    return s;
}

json scenario_to_json(const Scenario& scenario) {
    json jc;
    jc["bandwidth_hz"] = scenario.channel.bandwidth_hz;
    jc["carrier_hz"] = scenario.channel.carrier_hz;
    jc["n_bins"] = scenario.channel.n_bins;
    if (scenario.channel.reference_bin) jc["reference_bin"] = *scenario.channel.reference_bin;
    jc["paths"] = json::array();
    for (const PathSpec& p : scenario.channel.paths) {
        jc["paths"].push_back({{"attenuation", {p.attenuation.real(), p.attenuation.imag()}},
                               {"base_delay_s", p.base_delay_s},
                               {"breathing_coupling", p.breathing_coupling}});
    }

    json jm;
    jm["waveform"] = scenario.motion.waveform == Waveform::sinusoid ? "sinusoid" : "triangular";
    jm["displacement_m"] = scenario.motion.displacement_m;
    jm["rate_hz"] = scenario.motion.rate_hz;

    json ja;
    ja["gain_mag"] = {scenario.artifacts.gain_mag_lo, scenario.artifacts.gain_mag_hi};
    ja["gain_phase"] = {scenario.artifacts.gain_phase_lo, scenario.artifacts.gain_phase_hi};
    ja["delay_shift"] = {scenario.artifacts.shift_lo, scenario.artifacts.shift_hi};
    ja["jitter_std_s"] = scenario.artifacts.jitter_std_s;
    ja["noise_std"] = scenario.artifacts.noise_std;

    json j;
    j["channel"] = jc;
    j["motion"] = jm;
    j["artifacts"] = ja;
    j["duration_s"] = scenario.duration_s;
    j["nominal_rate_hz"] = scenario.nominal_rate_hz;
    j["seed"] = scenario.seed;
    j["label"] = scenario.label;
    return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    json j;
    is >> j;
    return scenario_from_json(j);
}

void save_scenario(const std::filesystem::path& path, const Scenario& scenario) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << scenario_to_json(scenario).dump(2) << "\n";
}

std::string method_name(Method method) {
    return method == Method::selection ? "selection" : "fusion";
}

void write_report_csv(std::ostream& os, const ScenarioReport& report) {
    os << "window_start,method,rate_hz,confidence,lambda,ok\n";
    for (const BreathingEstimate& e : report.estimates) {
        os << e.window_start_index << ',' << method_name(e.method) << ',' << fmt17(e.rate_hz) << ','
           << fmt17(e.confidence) << ',' << (e.lambda ? fmt17(*e.lambda) : std::string(""))
           << ',' << (e.ok ? 1 : 0) << "\n";
    }
}

json summary_json(const ScenarioReport& report, const WindowConfig& cfg,
                  const CalibrationConfig& calib_cfg) {
    json j;
    j["method"] = method_name(report.method);
    if (report.ground_truth_hz) j["ground_truth_hz"] = *report.ground_truth_hz;
    if (!std::isnan(report.median_abs_error_hz)) j["median_abs_error_hz"] = report.median_abs_error_hz;
    j["median_confidence"] = report.median_confidence;
    j["windows"] = report.estimates.size();
    std::size_t failed = 0;
    for (const BreathingEstimate& e : report.estimates) {
        if (!e.ok) ++failed;
    }
    j["failed_windows"] = failed;
    j["config"] = {{"window_snapshots", cfg.window_snapshots},
                   {"hop_snapshots", cfg.hop_snapshots},
                   {"nominal_rate_hz", cfg.nominal_rate_hz},
                   {"resolution_hz", cfg.resolution_hz},
                   {"band", {cfg.band.f_low_hz, cfg.band.f_high_hz}},
                   {"rank_tol", cfg.rank_tol},
                   {"count_convention",
                    cfg.count_convention == WindowCountConvention::paper ? "paper" : "full"}};
    j["calibration"] = {{"search_start_bin", calib_cfg.search_start_bin},
                        {"neighbor_radius", calib_cfg.neighbor_radius},
                        {"target_ref_bin", calib_cfg.target_ref_bin},
                        {"target_ref_energy", calib_cfg.target_ref_energy}};
    return j;
}

}  // namespace cirfuse
