// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace railsafe {

// Fixed-point decimal formatting; all CSV output goes through this so
// repeated runs produce byte-identical files.
inline std::string fmt_fixed(double value, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

enum class EventKind {
    NodeActivated,
    FrameTx,
    FrameLost,
    FrameCorrected,
    DecodeFailure,
    DecisionContinue,
    DecisionWarn,
    DecisionAlarm,
    BrakeApplied,
    TrainStopped,
};

inline const char* to_string(EventKind kind) noexcept {
    switch (kind) {
    case EventKind::NodeActivated: return "NodeActivated";
    case EventKind::FrameTx: return "FrameTx";
    case EventKind::FrameLost: return "FrameLost";
    case EventKind::FrameCorrected: return "FrameCorrected";
    case EventKind::DecodeFailure: return "DecodeFailure";
    case EventKind::DecisionContinue: return "DecisionContinue";
    case EventKind::DecisionWarn: return "DecisionWarn";
    case EventKind::DecisionAlarm: return "DecisionAlarm";
    case EventKind::BrakeApplied: return "BrakeApplied";
    case EventKind::TrainStopped: return "TrainStopped";
    }
    return "Unknown";
}

struct Event {
    double t_s;
    EventKind kind;
    std::string detail;
};

// Replayable record of a run; timestamps are non-decreasing.
struct EventLog {
    std::vector<Event> events;

    void add(double t_s, EventKind kind, std::string detail) {
        events.push_back({t_s, kind, std::move(detail)});
    }

    std::size_t count(EventKind kind) const noexcept {
        std::size_t n = 0;
        for (const Event& e : events)
            if (e.kind == kind) ++n;
        return n;
    }

    void write_csv(std::ostream& os) const {
        os << "t_s,kind,detail\n";
        for (const Event& e : events)
            os << fmt_fixed(e.t_s) << ',' << to_string(e.kind) << ',' << e.detail << '\n';
    }

    std::string to_csv() const {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }
};

// Aggregate results. frames_sent = frames_delivered + frames_lost_range
// + frames_lost_doppler holds exactly.
struct Metrics {
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t frames_lost_range = 0;
    std::uint64_t frames_lost_doppler = 0;
    std::uint64_t frames_corrected = 0;
    std::uint64_t decode_failures = 0;
    std::uint64_t warns = 0;
    std::uint64_t alarms = 0;
    std::optional<double> stop_pos_m;       // set when the train braked to a stop
    std::optional<double> min_clearance_m;  // stop position to nearest damaged section start

    void write_csv(std::ostream& os) const {
        os << "frames_sent," << frames_sent << '\n'
           << "frames_delivered," << frames_delivered << '\n'
           << "frames_lost_range," << frames_lost_range << '\n'
           << "frames_lost_doppler," << frames_lost_doppler << '\n'
           << "frames_corrected," << frames_corrected << '\n'
           << "decode_failures," << decode_failures << '\n'
           << "warns," << warns << '\n'
           << "alarms," << alarms << '\n';
        if (stop_pos_m) os << "stop_pos_m," << fmt_fixed(*stop_pos_m) << '\n';
        if (min_clearance_m) os << "min_clearance_m," << fmt_fixed(*min_clearance_m) << '\n';
    }

    std::string to_csv() const {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }
};

} // namespace railsafe
