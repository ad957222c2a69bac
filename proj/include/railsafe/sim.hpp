// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "railsafe/channel.hpp"
#include "railsafe/codec.hpp"
#include "railsafe/controller.hpp"
#include "railsafe/events.hpp"
#include "railsafe/rng.hpp"
#include "railsafe/scenario.hpp"
#include "railsafe/sensor.hpp"

namespace railsafe {

struct TrainState {
    double pos_m = 0.0;
    double speed_mps = 0.0;
    double target_speed_mps = 0.0;
    bool braking = false; // set by Alarm; stays set until the train stops
};

struct RunResult {
    EventLog log;
    Metrics metrics;
    TrainState train;                                      // state at the end of the run
    ControllerMode controller_mode = ControllerMode::Normal;
};

// Fixed-step simulation: per tick the train advances, every node steps,
// emitted frames pass through the channel, delivered frames are decoded
// and fed to the controller, and an Alarm engages the brakes. The run
// ends at duration_s, at the end of the track, or when a braking train
// stops. All randomness comes from substreams of master_seed, so a
// scenario replays byte-identically.
inline RunResult run(const Scenario& sc) {
    if (const auto violations = validate(sc); !violations.empty())
        throw InvalidScenario(violations.front());

    RunResult res;
    EventLog& log = res.log;
    Metrics& m = res.metrics;

    const LinearCode code = build_code(sc.code.k, sc.code.n, sc.code.t, sc.code.seed);
    SplitMix64 channel_rng = substream(sc.master_seed, Stream::Channel);
    SplitMix64 noise_rng = substream(sc.master_seed, Stream::SensorNoise);
    SplitMix64* noise = sc.sensor_noise ? &noise_rng : nullptr;

    Controller controller({sc.train.v_profile_mps, sc.confirm_timeout_s, +1});
    TrainState train;
    train.pos_m = sc.train.initial_pos_m;
    train.speed_mps = sc.train.initial_speed_mps;
    train.target_speed_mps = sc.train.v_profile_mps;

    std::vector<NodeState> states(sc.nodes.size());
    bool inject_armed = sc.inject_bad_frame_at_s >= 0.0;

    const auto addr_detail = [](unsigned addr) { return "addr=" + std::to_string(addr); };

    const auto apply_decision = [&](const Decision& d, double t, bool from_timeout) {
        switch (d.kind) {
        case Decision::Kind::Continue:
            train.target_speed_mps = d.target_speed_mps;
            log.add(t, EventKind::DecisionContinue, "target_mps=" + fmt_fixed(d.target_speed_mps));
            break;
        case Decision::Kind::Warn:
            ++m.warns;
            log.add(t, EventKind::DecisionWarn, addr_detail(static_cast<unsigned>(d.addr)));
            break;
        case Decision::Kind::Alarm:
            ++m.alarms;
            log.add(t, EventKind::DecisionAlarm,
                    addr_detail(static_cast<unsigned>(d.addr)) +
                        (from_timeout ? " cause=timeout" : ""));
            if (!train.braking) {
                train.braking = true;
                log.add(t, EventKind::BrakeApplied, "pos_m=" + fmt_fixed(train.pos_m));
            }
            break;
        }
    };

    for (std::uint64_t tick = 0;; ++tick) {
        const double t = static_cast<double>(tick) * sc.dt_s;
        if (t > sc.duration_s) break;

        // Train kinematics. Service slowdowns toward a lower target use
        // the same deceleration as emergency braking.
        const double goal =
            train.braking ? 0.0 : std::min(train.target_speed_mps, sc.train.v_profile_mps);
        if (train.speed_mps < goal)
            train.speed_mps = std::min(goal, train.speed_mps + sc.train.accel_mps2 * sc.dt_s);
        else if (train.speed_mps > goal)
            train.speed_mps = std::max(goal, train.speed_mps - sc.train.brake_decel_mps2 * sc.dt_s);
        train.pos_m += train.speed_mps * sc.dt_s;

        if (train.braking && train.speed_mps <= 0.0) {
            m.stop_pos_m = train.pos_m;
            log.add(t, EventKind::TrainStopped, "pos_m=" + fmt_fixed(train.pos_m));
            break;
        }
        if (train.pos_m >= sc.track_length_m) break; // end of monitored track

        for (std::size_t i = 0; i < sc.nodes.size(); ++i) {
            const NodeConfig& node = sc.nodes[i];
            NodeState& st = states[i];
            const NodeMode mode_before = st.mode;
            const auto frame = node_step(node, st, sc.sections[i], train.pos_m, t, code, noise);
            if (mode_before == NodeMode::Dormant && st.mode == NodeMode::Active)
                log.add(t, EventKind::NodeActivated,
                        addr_detail(node.addr) + " pos_m=" + fmt_fixed(node.position_m));
            if (!frame) continue;

            ++m.frames_sent;
            log.add(t, EventKind::FrameTx, addr_detail(node.addr));

            // Radial speeds are positive while closing on the node.
            const double sign = node.position_m >= train.pos_m ? 1.0 : -1.0;
            const double true_radial = sign * train.speed_mps;
            const double est_radial = sign * (train.speed_mps + sc.speed_estimate_error_mps);
            const TxOutcome out = transmit(*frame, code.n(), node.position_m, train.pos_m,
                                           true_radial, est_radial, sc.channel, channel_rng);
            if (!out.delivered()) {
                const bool range = out.reason == TxOutcome::LossReason::OutOfRange;
                range ? ++m.frames_lost_range : ++m.frames_lost_doppler;
                log.add(t, EventKind::FrameLost,
                        addr_detail(node.addr) +
                            (range ? " reason=OutOfRange" : " reason=DopplerFailure"));
                continue;
            }
            ++m.frames_delivered;

            const auto decoded = code.decode(out.bits);
            if (!decoded) {
                ++m.decode_failures;
                log.add(t, EventKind::DecodeFailure, addr_detail(node.addr));
                continue;
            }
            if (decoded->corrected_bits > 0) {
                ++m.frames_corrected;
                log.add(t, EventKind::FrameCorrected,
                        addr_detail(node.addr) + " bits=" + std::to_string(decoded->corrected_bits));
            }

            Payload12 payload = Payload12::from_packed(static_cast<std::uint16_t>(decoded->message));
            if (inject_armed && t >= sc.inject_bad_frame_at_s) {
                payload = pack_payload(payload.addr(), payload.vib(), 0);
                inject_armed = false;
            }
            apply_decision(controller.on_frame(payload, t), t, false);
        }

        if (const auto d = controller.on_timeout(t)) apply_decision(*d, t, true);
    }

    if (m.stop_pos_m) {
        std::optional<double> nearest;
        for (std::size_t i = 0; i < sc.sections.size(); ++i) {
            if (!sc.sections[i].damaged) continue;
            const double clearance = sc.nodes[i].position_m - *m.stop_pos_m;
            if (!nearest || std::abs(clearance) < std::abs(*nearest)) nearest = clearance;
        }
        m.min_clearance_m = nearest; // positive: stopped short of the damage
    }

    res.train = train;
    res.controller_mode = controller.mode();
    return res;
}

} // namespace railsafe
