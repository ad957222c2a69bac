// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "railsafe/codec.hpp"

namespace railsafe {

// Linear grade-to-speed map: full profile speed at grade 127, stop at 0.
inline double target_speed(unsigned vib7, double v_profile_mps) {
    if (vib7 > 127) throw FieldOverflow("vib7 exceeds 7 bits");
    return v_profile_mps * static_cast<double>(vib7) / 127.0;
}

enum class ControllerMode { Normal, Pending, Warned, Alarmed };

struct Decision {
    enum class Kind { Continue, Warn, Alarm };

    Kind kind = Kind::Continue;
    double target_speed_mps = 0.0; // valid for Continue
    int addr = -1;                 // node the Warn/Alarm refers to

    static Decision proceed(double target_mps) noexcept {
        return Decision{Kind::Continue, target_mps, -1};
    }
    static Decision warn(int addr) noexcept { return Decision{Kind::Warn, 0.0, addr}; }
    static Decision alarm(int addr) noexcept { return Decision{Kind::Alarm, 0.0, addr}; }
};

// Train-side decision engine. A failure report opens a pending record
// for its node; a second failure from the same node or the next node in
// the travel direction confirms it (Alarm), a safe frame from either
// refutes it (Warn, advise visual inspection). A pending record that
// outlives its confirmation deadline escalates to Alarm: a failure
// report followed by radio silence is loss of safety evidence. Alarmed
// is absorbing and Alarm is emitted at most once.
class Controller {
public:
    struct Config {
        double v_profile_mps = 27.78;
        double confirm_timeout_s = 2.0; // <= 0 disables the deadline
        int travel_direction = +1;      // +1: node addresses increase ahead
    };

    explicit Controller(Config cfg) : cfg_(cfg), current_target_mps_(cfg.v_profile_mps) {}

    // Processes one error-corrected payload. Uncorrectable frames are
    // dropped upstream and never reach this point.
    Decision on_frame(const Payload12& frame, double now_s) {
        if (alarmed_) return Decision::proceed(0.0); // absorbing
        warn_latch_ = false;

        if (frame.good() == 0) {
            for (const PendingRecord& rec : pending_)
                if (confirms(frame.addr(), rec.addr)) {
                    alarmed_ = true;
                    pending_.clear();
                    return Decision::alarm(frame.addr());
                }
            // Unconfirmed failure: open its own record and hold the
            // current speed until it is confirmed or refuted.
            pending_.push_back({frame.addr(), deadline_from(now_s)});
            return Decision::proceed(current_target_mps_);
        }

        last_good_quality_ = frame.vib();
        const auto resolved = std::erase_if(
            pending_, [&](const PendingRecord& rec) { return confirms(frame.addr(), rec.addr); });
        if (resolved > 0) {
            warn_latch_ = true;
            return Decision::warn(frame.addr());
        }
        current_target_mps_ = target_speed(frame.vib(), cfg_.v_profile_mps);
        return Decision::proceed(current_target_mps_);
    }

    // Deadline check, called once per tick. Strict comparison: the
    // deadline instant itself does not fire.
    std::optional<Decision> on_timeout(double now_s) {
        if (alarmed_) return std::nullopt;
        for (const PendingRecord& rec : pending_)
            if (now_s > rec.deadline_s) {
                alarmed_ = true;
                const int addr = rec.addr;
                pending_.clear();
                return Decision::alarm(addr);
            }
        return std::nullopt;
    }

    ControllerMode mode() const noexcept {
        if (alarmed_) return ControllerMode::Alarmed;
        if (!pending_.empty()) return ControllerMode::Pending;
        if (warn_latch_) return ControllerMode::Warned;
        return ControllerMode::Normal;
    }

    double current_target_mps() const noexcept { return current_target_mps_; }
    unsigned last_good_quality() const noexcept { return last_good_quality_; }
    std::size_t pending_count() const noexcept { return pending_.size(); }

private:
    struct PendingRecord {
        std::uint8_t addr;
        double deadline_s;
    };

    std::uint8_t next_addr(std::uint8_t addr) const noexcept {
        return static_cast<std::uint8_t>((addr + 16 + cfg_.travel_direction) & 0xF);
    }

    // A frame from `frame_addr` speaks for a record at `rec_addr` iff it
    // comes from that node or the next node along the travel direction.
    bool confirms(std::uint8_t frame_addr, std::uint8_t rec_addr) const noexcept {
        return frame_addr == rec_addr || frame_addr == next_addr(rec_addr);
    }

    double deadline_from(double now_s) const noexcept {
        if (cfg_.confirm_timeout_s <= 0.0) return std::numeric_limits<double>::infinity();
        return now_s + cfg_.confirm_timeout_s;
    }

    Config cfg_;
    std::vector<PendingRecord> pending_;
    bool alarmed_ = false;
    bool warn_latch_ = false;
    double current_target_mps_;
    unsigned last_good_quality_ = 127;
};

} // namespace railsafe
