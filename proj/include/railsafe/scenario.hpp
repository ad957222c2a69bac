// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "railsafe/channel.hpp"
#include "railsafe/sensor.hpp"

namespace railsafe {

class InvalidScenario : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainParams {
    double initial_pos_m = 0.0;
    double initial_speed_mps = 0.0;
    double v_profile_mps = 27.78;
    double accel_mps2 = 0.3;
    double brake_decel_mps2 = 1.0;
};

struct CodeParams {
    unsigned n = 29;
    unsigned k = 12;
    unsigned t = 2;
    std::uint64_t seed = 42;
};

// Complete simulation input. The JSON form mirrors these fields
// one-to-one; the last four are optional test hooks that default to
// standard behavior when absent.
struct Scenario {
    double track_length_m = 0.0;
    std::vector<NodeConfig> nodes;
    std::vector<TrackSection> sections; // sections[i] covers nodes[i]
    TrainParams train;
    ChannelParams channel;
    CodeParams code;
    double dt_s = 0.01;
    double duration_s = 0.0;
    std::uint64_t master_seed = 0;

    double speed_estimate_error_mps = 0.0; // constant Doppler-compensation error
    double confirm_timeout_s = 2.0;        // controller deadline; 0 disables
    double inject_bad_frame_at_s = -1.0;   // force good=0 on the first decoded frame at/after this time; < 0 disables
    bool sensor_noise = false;             // +/-1 quantization noise on vib readings
};

// Checks every scenario invariant; returns one message per violation,
// empty when the scenario is runnable.
inline std::vector<std::string> validate(const Scenario& sc) {
    std::vector<std::string> v;
    auto fail = [&](const std::string& msg) { v.push_back(msg); };

    if (!(sc.dt_s > 0.0)) fail("dt_s must be > 0");
    if (!(sc.duration_s > 0.0)) fail("duration_s must be > 0");
    if (!(sc.track_length_m > 0.0)) fail("track_length_m must be > 0");

    if (!(sc.train.v_profile_mps > 0.0)) fail("train.v_profile_mps must be > 0");
    if (sc.train.initial_speed_mps < 0.0) fail("train.initial_speed_mps must be >= 0");
    if (sc.train.initial_speed_mps > sc.train.v_profile_mps)
        fail("train.initial_speed_mps must not exceed v_profile_mps");
    if (!(sc.train.accel_mps2 > 0.0)) fail("train.accel_mps2 must be > 0");
    if (!(sc.train.brake_decel_mps2 > 0.0)) fail("train.brake_decel_mps2 must be > 0");
    if (sc.train.initial_pos_m < 0.0 || sc.train.initial_pos_m >= sc.track_length_m)
        fail("train.initial_pos_m must lie on the track");

    if (!(sc.channel.carrier_hz > 0.0)) fail("channel.carrier_hz must be > 0");
    if (!(sc.channel.max_range_m > 0.0)) fail("channel.max_range_m must be > 0");
    if (sc.channel.ber_near < 0.0 || sc.channel.ber_near > sc.channel.ber_far ||
        !(sc.channel.ber_far < 0.5))
        fail("channel BER must satisfy 0 <= ber_near <= ber_far < 0.5");
    if (sc.channel.doppler_tol_hz < 0.0) fail("channel.doppler_tol_hz must be >= 0");
    if (!(sc.channel.c_mps > 0.0)) fail("channel.c_mps must be > 0");

    if (sc.code.k == 0 || sc.code.n <= sc.code.k) fail("code must satisfy n > k > 0");
    if (sc.code.n > 63) fail("code.n must be <= 63");
    if (sc.code.k != Payload12::kBits) fail("code.k must be 12 to carry the frame payload");

    if (sc.confirm_timeout_s < 0.0) fail("confirm_timeout_s must be >= 0 (0 disables)");

    for (std::size_t i = 0; i < sc.nodes.size(); ++i) {
        const NodeConfig& node = sc.nodes[i];
        const std::string tag = "nodes[" + std::to_string(i) + "]";
        if (node.addr > 15) fail(tag + ".addr must fit 4 bits");
        if (!(node.activation_range_m > 0.0)) fail(tag + ".activation_range_m must be > 0");
        if (!(node.tx_period_s > 0.0)) fail(tag + ".tx_period_s must be > 0");
        if (node.comparator_threshold < 0.0) fail(tag + ".comparator_threshold must be >= 0");
        if (i > 0 && !(node.position_m > sc.nodes[i - 1].position_m))
            fail("node positions must be strictly increasing");
    }

    if (sc.sections.size() != sc.nodes.size()) {
        fail("every node needs exactly one section (sections[i] covers nodes[i])");
    } else {
        for (std::size_t i = 0; i < sc.sections.size(); ++i) {
            if (sc.sections[i].addr != sc.nodes[i].addr)
                fail("sections[" + std::to_string(i) + "].addr does not match its node");
            if (sc.sections[i].quality_q > 127)
                fail("sections[" + std::to_string(i) + "].quality_q must be <= 127");
        }
    }

    // Address reuse is allowed along a long track, but not where two
    // nodes could be heard in the same place.
    for (std::size_t i = 0; i < sc.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < sc.nodes.size(); ++j)
            if (sc.nodes[i].addr == sc.nodes[j].addr &&
                std::abs(sc.nodes[j].position_m - sc.nodes[i].position_m) <=
                    2.0 * sc.channel.max_range_m)
                fail("duplicate address within radio range: addr " +
                     std::to_string(sc.nodes[i].addr));

    return v;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    sc.track_length_m = j.at("track_length_m").get<double>();
    sc.duration_s = j.at("duration_s").get<double>();
    sc.dt_s = j.value("dt_s", sc.dt_s);
    sc.master_seed = j.at("master_seed").get<std::uint64_t>();

    const auto& train = j.at("train");
    sc.train.initial_pos_m = train.at("initial_pos_m").get<double>();
    sc.train.initial_speed_mps = train.at("initial_speed_mps").get<double>();
    sc.train.v_profile_mps = train.at("v_profile_mps").get<double>();
    sc.train.accel_mps2 = train.value("accel_mps2", sc.train.accel_mps2);
    sc.train.brake_decel_mps2 = train.value("brake_decel_mps2", sc.train.brake_decel_mps2);

    if (j.contains("channel")) {
        const auto& ch = j.at("channel");
        sc.channel.carrier_hz = ch.value("carrier_hz", sc.channel.carrier_hz);
        sc.channel.max_range_m = ch.value("max_range_m", sc.channel.max_range_m);
        sc.channel.ber_near = ch.value("ber_near", sc.channel.ber_near);
        sc.channel.ber_far = ch.value("ber_far", sc.channel.ber_far);
        sc.channel.doppler_tol_hz = ch.value("doppler_tol_hz", sc.channel.doppler_tol_hz);
        sc.channel.c_mps = ch.value("c_mps", sc.channel.c_mps);
    }
    if (j.contains("code")) {
        const auto& code = j.at("code");
        sc.code.n = code.value("n", sc.code.n);
        sc.code.k = code.value("k", sc.code.k);
        sc.code.t = code.value("t", sc.code.t);
        sc.code.seed = code.value("seed", sc.code.seed);
    }

    for (const auto& jn : j.at("nodes")) {
        NodeConfig node;
        node.addr = static_cast<std::uint8_t>(jn.at("addr").get<unsigned>());
        node.position_m = jn.at("position_m").get<double>();
        node.activation_range_m = jn.value("activation_range_m", node.activation_range_m);
        node.tx_period_s = jn.value("tx_period_s", node.tx_period_s);
        node.comparator_threshold = jn.value("comparator_threshold", node.comparator_threshold);
        sc.nodes.push_back(node);
    }
    for (const auto& js : j.at("sections")) {
        TrackSection section;
        section.addr = static_cast<std::uint8_t>(js.at("addr").get<unsigned>());
        section.quality_q = static_cast<std::uint8_t>(js.value("quality_q", 127u));
        section.damaged = js.value("damaged", false);
        sc.sections.push_back(section);
    }

    sc.speed_estimate_error_mps = j.value("speed_estimate_error_mps", sc.speed_estimate_error_mps);
    sc.confirm_timeout_s = j.value("confirm_timeout_s", sc.confirm_timeout_s);
    sc.inject_bad_frame_at_s = j.value("inject_bad_frame_at_s", sc.inject_bad_frame_at_s);
    sc.sensor_noise = j.value("sensor_noise", sc.sensor_noise);
    return sc;
}

inline nlohmann::json scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    j["track_length_m"] = sc.track_length_m;
    j["duration_s"] = sc.duration_s;
    j["dt_s"] = sc.dt_s;
    j["master_seed"] = sc.master_seed;
    j["train"] = {{"initial_pos_m", sc.train.initial_pos_m},
                  {"initial_speed_mps", sc.train.initial_speed_mps},
                  {"v_profile_mps", sc.train.v_profile_mps},
                  {"accel_mps2", sc.train.accel_mps2},
                  {"brake_decel_mps2", sc.train.brake_decel_mps2}};
    j["channel"] = {{"carrier_hz", sc.channel.carrier_hz},
                    {"max_range_m", sc.channel.max_range_m},
                    {"ber_near", sc.channel.ber_near},
                    {"ber_far", sc.channel.ber_far},
                    {"doppler_tol_hz", sc.channel.doppler_tol_hz},
                    {"c_mps", sc.channel.c_mps}};
    j["code"] = {{"n", sc.code.n}, {"k", sc.code.k}, {"t", sc.code.t}, {"seed", sc.code.seed}};
    j["nodes"] = nlohmann::json::array();
    for (const NodeConfig& node : sc.nodes)
        j["nodes"].push_back({{"addr", node.addr},
                              {"position_m", node.position_m},
                              {"activation_range_m", node.activation_range_m},
                              {"tx_period_s", node.tx_period_s},
                              {"comparator_threshold", node.comparator_threshold}});
    j["sections"] = nlohmann::json::array();
    for (const TrackSection& section : sc.sections)
        j["sections"].push_back({{"addr", section.addr},
                                 {"quality_q", section.quality_q},
                                 {"damaged", section.damaged}});
    j["speed_estimate_error_mps"] = sc.speed_estimate_error_mps;
    j["confirm_timeout_s"] = sc.confirm_timeout_s;
    j["inject_bad_frame_at_s"] = sc.inject_bad_frame_at_s;
    j["sensor_noise"] = sc.sensor_noise;
    return j;
}

inline Scenario load_scenario(std::istream& is) {
    return scenario_from_json(nlohmann::json::parse(is));
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    return load_scenario(in);
}

} // namespace railsafe
