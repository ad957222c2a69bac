// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

#include "railsafe/codec.hpp"
#include "railsafe/rng.hpp"

namespace railsafe {

inline constexpr double kLightSpeed_mps = 299'792'458.0;

// RF link model: hard range cutoff, distance-dependent independent bit
// flips, and a Doppler gate driven by the receiver's speed estimate.
struct ChannelParams {
    double carrier_hz = 915e6;
    double max_range_m = 1600.0;
    double ber_near = 0.001; // bit-flip probability at distance 0
    double ber_far = 0.02;   // bit-flip probability at max_range_m
    double doppler_tol_hz = 200.0;
    double c_mps = kLightSpeed_mps;
};

// Carrier offset f*v/c; positive when transmitter and receiver close.
inline double doppler_shift(double carrier_hz, double radial_speed_mps,
                            double c_mps = kLightSpeed_mps) {
    return carrier_hz * radial_speed_mps / c_mps;
}

// Linear interpolation between the BER endpoints.
inline double bit_error_rate(const ChannelParams& params, double distance_m) {
    return params.ber_near + (params.ber_far - params.ber_near) * (distance_m / params.max_range_m);
}

struct TxOutcome {
    enum class Status { Delivered, Lost };
    enum class LossReason { OutOfRange, DopplerFailure };

    Status status = Status::Delivered;
    LossReason reason = LossReason::OutOfRange; // valid when Lost
    Codeword bits{};                            // valid when Delivered
    unsigned flipped_count = 0;                 // valid when Delivered

    bool delivered() const noexcept { return status == Status::Delivered; }

    static TxOutcome lost(LossReason why) noexcept {
        TxOutcome o;
        o.status = Status::Lost;
        o.reason = why;
        return o;
    }

    static TxOutcome delivered_frame(Codeword bits, unsigned flipped) noexcept {
        TxOutcome o;
        o.bits = bits;
        o.flipped_count = flipped;
        return o;
    }
};

// One frame over the link. Loss is an outcome, not an error. The
// Doppler gate compares the residual between the true shift and the
// compensated shift against the tolerance with a strict '>': a residual
// exactly at the tolerance still passes. Exactly n rng draws are
// consumed for a delivered frame, none for a lost one.
inline TxOutcome transmit(Codeword frame, unsigned n, double tx_pos_m, double rx_pos_m,
                          double true_speed_mps, double speed_estimate_mps,
                          const ChannelParams& params, SplitMix64& rng) {
    const double distance = std::abs(tx_pos_m - rx_pos_m);
    if (distance > params.max_range_m) return TxOutcome::lost(TxOutcome::LossReason::OutOfRange);

    const double residual_hz = std::abs(doppler_shift(params.carrier_hz, true_speed_mps, params.c_mps) -
                                        doppler_shift(params.carrier_hz, speed_estimate_mps, params.c_mps));
    if (residual_hz > params.doppler_tol_hz) return TxOutcome::lost(TxOutcome::LossReason::DopplerFailure);

    const double ber = bit_error_rate(params, distance);
    std::uint64_t flips = 0;
    for (unsigned i = 0; i < n; ++i)
        if (rng.next_double() < ber) flips |= std::uint64_t{1} << i;
    return TxOutcome::delivered_frame(Codeword{frame.bits ^ flips},
                                      static_cast<unsigned>(std::popcount(flips)));
}

} // namespace railsafe
