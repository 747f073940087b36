#include <doctest.h>

#include <sstream>
#include <string>

#include "cirfuse/io.hpp"
#include "cirfuse/presets.hpp"

using namespace cirfuse;

TEST_CASE("recording text format round-trips exactly") {
    Scenario s = los_preset(2.0, 0.3, 19);
    CirRecording rec = simulate(s);

    std::ostringstream os;
    write_recording(os, rec);
    std::istringstream is(os.str());
    CirRecording back = read_recording(is);

    CHECK(back.nominal_rate_hz == rec.nominal_rate_hz);
    CHECK(back.meta.n_bins == rec.meta.n_bins);
    CHECK(back.meta.label == rec.meta.label);
    REQUIRE(back.meta.ground_truth_hz.has_value());
    CHECK(*back.meta.ground_truth_hz == *rec.meta.ground_truth_hz);
    REQUIRE(back.snapshots.size() == rec.snapshots.size());
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
        CHECK(back.snapshots[i].timestamp_s == rec.snapshots[i].timestamp_s);
        CHECK(back.snapshots[i].bins == rec.snapshots[i].bins);
    }
}

TEST_CASE("malformed recording lines report the line number") {
    Scenario s = los_preset(2.0, 0.3, 19);
    CirRecording rec = simulate(s);
    rec.snapshots.resize(3);
    std::ostringstream os;
    write_recording(os, rec);

    std::string text = os.str();
    // truncate the third snapshot line (line 4 of the file)
    std::size_t pos = 0;
    for (int line = 0; line < 3; ++line) pos = text.find('\n', pos) + 1;
    std::istringstream broken(text.substr(0, pos + 20));
    CHECK_THROWS_WITH_AS(read_recording(broken), doctest::Contains("line 4"),
                         std::runtime_error);
}

TEST_CASE("scenario JSON round-trips") {
    Scenario s = spread_preset(4.0, 0.25, 7);
    Scenario back = scenario_from_json(scenario_to_json(s));

    CHECK(back.seed == s.seed);
    CHECK(back.label == s.label);
    CHECK(back.duration_s == s.duration_s);
    CHECK(back.nominal_rate_hz == s.nominal_rate_hz);
    CHECK(back.motion.rate_hz == s.motion.rate_hz);
    CHECK(back.motion.displacement_m == s.motion.displacement_m);
    CHECK(back.artifacts.noise_std == s.artifacts.noise_std);
    REQUIRE(back.channel.paths.size() == s.channel.paths.size());
    for (std::size_t i = 0; i < s.channel.paths.size(); ++i) {
        CHECK(back.channel.paths[i].attenuation == s.channel.paths[i].attenuation);
        CHECK(back.channel.paths[i].base_delay_s == s.channel.paths[i].base_delay_s);
        CHECK(back.channel.paths[i].breathing_coupling == s.channel.paths[i].breathing_coupling);
    }

    // identical recordings from the round-tripped scenario
    CirRecording r1 = simulate(s);
    CirRecording r2 = simulate(back);
    REQUIRE(r1.snapshots.size() == r2.snapshots.size());
    for (std::size_t i = 0; i < r1.snapshots.size(); ++i) {
        CHECK(r1.snapshots[i].bins == r2.snapshots[i].bins);
    }
}

TEST_CASE("unknown scenario keys are rejected") {
    nlohmann::json j = scenario_to_json(los_preset(2.0, 0.3, 1));
    j["unexpected"] = 1;
    CHECK_THROWS_WITH_AS(scenario_from_json(j), doctest::Contains("unexpected"),
                         std::invalid_argument);

    nlohmann::json nested = scenario_to_json(los_preset(2.0, 0.3, 1));
    nested["motion"]["typo_key"] = 0;
    CHECK_THROWS_WITH_AS(scenario_from_json(nested), doctest::Contains("typo_key"),
                         std::invalid_argument);
}

TEST_CASE("missing required keys are named in the error") {
    nlohmann::json j = scenario_to_json(los_preset(2.0, 0.3, 1));
    j["motion"].erase("displacement_m");
    CHECK_THROWS_WITH_AS(scenario_from_json(j), doctest::Contains("displacement_m"),
                         std::exception);
}

TEST_CASE("summary JSON echoes the band and reports medians") {
    CirRecording rec = simulate(los_preset(4.0, 0.3, 3));
    WindowConfig cfg;
    cfg.hop_snapshots = 80;
    ScenarioReport rep = run_recording(rec, cfg, CalibrationConfig{});
    nlohmann::json j = summary_json(rep, cfg, CalibrationConfig{});
    CHECK(j["config"]["band"][0] == 0.1);
    CHECK(j["config"]["band"][1] == 0.5);
    CHECK(j["config"]["window_snapshots"] == 800);
    CHECK(j.contains("median_abs_error_hz"));
    CHECK(j["median_abs_error_hz"].get<double>() <= 0.005);
}

TEST_CASE("CSV report has one line per window plus header") {
    CirRecording rec = simulate(los_preset(4.0, 0.3, 3));
    WindowConfig cfg;
    cfg.hop_snapshots = 80;
    ScenarioReport rep = run_recording(rec, cfg, CalibrationConfig{});
    std::ostringstream os;
    write_report_csv(os, rep);
    std::istringstream is(os.str());
    std::string line;
    std::size_t lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == rep.estimates.size() + 1);
}

TEST_CASE("preset names parse") {
    CHECK(preset_by_name("los-2mm-0.3hz", 1).has_value());
    CHECK(preset_by_name("spread-8mm-0.45hz", 1).has_value());
    CHECK(preset_by_name("static", 1).has_value());
    CHECK(!preset_by_name("nope", 1).has_value());
}

TEST_CASE("estimates agree between in-memory and re-parsed recordings") {
    CirRecording rec = simulate(los_preset(4.0, 0.3, 23));
    std::ostringstream os;
    write_recording(os, rec);
    std::istringstream is(os.str());
    CirRecording back = read_recording(is);

    WindowConfig cfg;
    cfg.hop_snapshots = 160;
    ScenarioReport a = run_recording(rec, cfg, CalibrationConfig{});
    ScenarioReport b = run_recording(back, cfg, CalibrationConfig{});
    REQUIRE(a.estimates.size() == b.estimates.size());
    for (std::size_t i = 0; i < a.estimates.size(); ++i) {
        CHECK(a.estimates[i].rate_hz == b.estimates[i].rate_hz);
        CHECK(a.estimates[i].confidence == b.estimates[i].confidence);
    }
}
