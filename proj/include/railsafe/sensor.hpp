// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "railsafe/codec.hpp"
#include "railsafe/rng.hpp"

namespace railsafe {

// Trackside sensor node. A node sleeps until train-induced vibration
// wakes it (modeled geometrically: train within activation_range_m),
// then retransmits its reading every tx_period_s until the train has
// passed beyond range.
struct NodeConfig {
    std::uint8_t addr = 0; // 4-bit wire address
    double position_m = 0.0;
    double activation_range_m = 1600.0;
    double tx_period_s = 0.1;
    double comparator_threshold = 0.2; // rail-asymmetry trip level
};

// Ground truth for the stretch of track a node covers.
struct TrackSection {
    std::uint8_t addr = 0;      // covering node
    std::uint8_t quality_q = 127; // 0..127, 127 = perfect
    bool damaged = false;        // rail asymmetry present
};

enum class NodeMode { Dormant, Active };

struct NodeState {
    NodeMode mode = NodeMode::Dormant;
    double last_tx_time_s = -std::numeric_limits<double>::infinity();
};

// Train-induced vibration amplitude at distance d: inverse square
// around a 1 km reference, floored at 10 m to keep the model finite.
inline double vibration_amplitude(double distance_m, double reference_amplitude) {
    constexpr double kReferenceDistance_m = 1000.0;
    constexpr double kDistanceFloor_m = 10.0;
    const double d = std::max(distance_m, kDistanceFloor_m);
    const double ratio = kReferenceDistance_m / d;
    return reference_amplitude * ratio * ratio;
}

struct SenseResult {
    std::uint8_t vib7; // quantized track grade
    std::uint8_t good; // two-rail comparator flag, 1 = consistent
};

// Reads the node's sensors. The 7-bit value reports the section's
// standing grade (optionally with +/-1 quantization noise); the
// goodness flag trips when the modeled rail asymmetry exceeds the
// comparator threshold.
inline SenseResult sense(const NodeConfig& node, const TrackSection& section,
                         [[maybe_unused]] double train_pos_m,
                         SplitMix64* noise_rng = nullptr) {
    int vib = section.quality_q;
    if (noise_rng)
        vib = std::clamp(vib + static_cast<int>(noise_rng->next_below(3)) - 1, 0, 127);
    const double asymmetry = section.damaged ? 1.0 : 0.0;
    const std::uint8_t good = asymmetry > node.comparator_threshold ? 0 : 1;
    return {static_cast<std::uint8_t>(vib), good};
}

namespace detail {
// Slack for the tx-period comparison so tick-grid rounding cannot skip
// a transmission slot.
inline constexpr double kTxPeriodSlack_s = 1e-9;
} // namespace detail

// Advances one node by one simulation tick. Returns the encoded frame
// when the node transmits. The first transmission fires on the
// activation tick; a dormant node never transmits.
inline std::optional<Codeword> node_step(const NodeConfig& node, NodeState& state,
                                         const TrackSection& section, double train_pos_m,
                                         double now_s, const LinearCode& code,
                                         SplitMix64* noise_rng = nullptr) {
    const double offset = train_pos_m - node.position_m;
    if (state.mode == NodeMode::Dormant) {
        if (std::abs(offset) <= node.activation_range_m) state.mode = NodeMode::Active;
    } else if (offset > node.activation_range_m) {
        state.mode = NodeMode::Dormant; // train passed beyond range
    }
    if (state.mode != NodeMode::Active) return std::nullopt;
    if (now_s - state.last_tx_time_s < node.tx_period_s - detail::kTxPeriodSlack_s)
        return std::nullopt;
    state.last_tx_time_s = now_s;
    const SenseResult reading = sense(node, section, train_pos_m, noise_rng);
    return code.encode(pack_payload(node.addr, reading.vib7, reading.good));
}

} // namespace railsafe
