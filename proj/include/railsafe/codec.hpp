// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "railsafe/rng.hpp"

namespace railsafe {

class FieldOverflow : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class ConstructionFailed : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 12-bit telemetry payload, bit layout [addr:4][vib:7][good:1] with the
// address in the most significant bits. good = 1 means the two rails
// read consistent (safe); good = 0 is a failure indication.
class Payload12 {
public:
    static constexpr unsigned kBits = 12;

    constexpr Payload12() = default;

    Payload12(unsigned addr, unsigned vib, unsigned good) {
        if (addr > 15) throw FieldOverflow("addr exceeds 4 bits");
        if (vib > 127) throw FieldOverflow("vib exceeds 7 bits");
        if (good > 1) throw FieldOverflow("good exceeds 1 bit");
        packed_ = static_cast<std::uint16_t>((addr << 8) | (vib << 1) | good);
    }

    static Payload12 from_packed(std::uint16_t packed) {
        if (packed >> kBits) throw FieldOverflow("packed value exceeds 12 bits");
        Payload12 p;
        p.packed_ = packed;
        return p;
    }

    constexpr std::uint8_t addr() const noexcept { return static_cast<std::uint8_t>(packed_ >> 8); }
    constexpr std::uint8_t vib() const noexcept { return static_cast<std::uint8_t>((packed_ >> 1) & 0x7f); }
    constexpr std::uint8_t good() const noexcept { return static_cast<std::uint8_t>(packed_ & 1); }
    constexpr std::uint16_t packed() const noexcept { return packed_; }

    friend constexpr bool operator==(Payload12 a, Payload12 b) noexcept { return a.packed_ == b.packed_; }

private:
    std::uint16_t packed_ = 0;
};

inline Payload12 pack_payload(unsigned addr, unsigned vib, unsigned good) {
    return Payload12(addr, vib, good);
}

struct PayloadFields {
    std::uint8_t addr;
    std::uint8_t vib;
    std::uint8_t good;
};

inline PayloadFields unpack_payload(Payload12 p) noexcept {
    return {p.addr(), p.vib(), p.good()};
}

// An n-bit codeword. Bit n-1 of `bits` is transmitted first (MSB-first
// wire order); the systematic payload occupies the top k bits.
struct Codeword {
    std::uint64_t bits = 0;

    friend constexpr bool operator==(Codeword a, Codeword b) noexcept { return a.bits == b.bits; }
};

struct DecodeResult {
    std::uint64_t message = 0;
    unsigned corrected_bits = 0;
};

namespace detail {

// Minimum nonzero codeword weight of the code spanned by `rows`,
// by exhaustive Gray-code walk over all 2^k - 1 nonzero messages.
// `best_message`, when given, receives one message attaining the minimum.
inline unsigned min_codeword_weight(const std::vector<std::uint64_t>& rows,
                                    std::uint64_t* best_message = nullptr) {
    const unsigned k = static_cast<unsigned>(rows.size());
    std::uint64_t cw = 0;
    std::uint64_t prev_gray = 0;
    unsigned best = std::numeric_limits<unsigned>::max();
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << k); ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        const unsigned flipped = static_cast<unsigned>(std::countr_zero(gray ^ prev_gray));
        cw ^= rows[k - 1 - flipped]; // row i spans message bit k-1-i
        prev_gray = gray;
        const auto w = static_cast<unsigned>(std::popcount(cw));
        if (w < best) {
            best = w;
            if (best_message) *best_message = gray;
        }
    }
    return best;
}

// Visits every w-subset of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(unsigned n, unsigned w, Fn&& fn) {
    std::vector<unsigned> idx(w);
    for (unsigned i = 0; i < w; ++i) idx[i] = i;
    if (w > n) return;
    while (true) {
        fn(idx);
        int i = static_cast<int>(w) - 1;
        while (i >= 0 && idx[i] == n - w + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline std::uint64_t binomial(unsigned n, unsigned w) {
    std::uint64_t r = 1;
    for (unsigned i = 1; i <= w; ++i) r = r * (n - w + i) / i;
    return r;
}

} // namespace detail

// Systematic binary (n,k) linear block code with syndrome-table
// decoding. Generator rows are n-bit values in wire order (bit n-1
// first); row i is the codeword of the unit message with bit i of the
// k-bit message string set. Limits: n <= 63, k <= 28 (the minimum
// distance is verified by exhaustive enumeration at construction).
class LinearCode {
public:
    LinearCode(unsigned n, unsigned k, unsigned t, std::vector<std::uint64_t> generator_rows)
        : n_(n), k_(k), r_(n - k), t_(t), g_(std::move(generator_rows)) {
        if (k == 0 || n <= k) throw std::invalid_argument("require n > k > 0");
        if (n > 63) throw std::invalid_argument("codeword length limited to 63 bits");
        if (k > 28) throw std::invalid_argument("message length limited to 28 bits");
        if (t > 8) throw std::invalid_argument("correction capability limited to 8 bits");
        if (g_.size() != k) throw std::invalid_argument("generator must have k rows");

        const std::uint64_t row_mask = (std::uint64_t{1} << n_) - 1;
        for (unsigned i = 0; i < k_; ++i) {
            if (g_[i] & ~row_mask) throw std::invalid_argument("generator row wider than n bits");
            if ((g_[i] >> r_) != (std::uint64_t{1} << (k_ - 1 - i)))
                throw std::invalid_argument("generator is not in systematic form [I_k | P]");
        }

        std::uint64_t patterns = 0;
        for (unsigned w = 0; w <= t_; ++w) patterns += detail::binomial(n_, w);
        full_coverage_ = patterns;
        if (patterns > (std::uint64_t{1} << 22))
            throw std::invalid_argument("syndrome table would exceed the supported size");

        build_parity_check();
        build_syndrome_table();
        d_min_ = detail::min_codeword_weight(g_);
    }

    unsigned n() const noexcept { return n_; }
    unsigned k() const noexcept { return k_; }
    unsigned t() const noexcept { return t_; }
    unsigned d_min() const noexcept { return d_min_; }

    const std::vector<std::uint64_t>& generator_rows() const noexcept { return g_; }
    const std::vector<std::uint64_t>& parity_check_rows() const noexcept { return h_; }

    // Number of distinct syndromes in the table; equals
    // full_coverage_count() exactly when d_min >= 2t+1.
    std::size_t syndrome_entries() const noexcept { return table_.size(); }
    std::uint64_t full_coverage_count() const noexcept { return full_coverage_; }

    Codeword encode(std::uint64_t message) const {
        if (message >> k_) throw FieldOverflow("message exceeds k bits");
        std::uint64_t cw = 0;
        for (unsigned i = 0; i < k_; ++i)
            if ((message >> (k_ - 1 - i)) & 1) cw ^= g_[i];
        return Codeword{cw};
    }

    Codeword encode(Payload12 payload) const {
        if (k_ != Payload12::kBits) throw std::invalid_argument("payload encoding requires k = 12");
        return encode(static_cast<std::uint64_t>(payload.packed()));
    }

    std::uint64_t syndrome(Codeword received) const noexcept {
        std::uint64_t s = 0;
        for (unsigned j = 0; j < r_; ++j)
            s = (s << 1) | (static_cast<unsigned>(std::popcount(h_[j] & received.bits)) & 1u);
        return s;
    }

    // Syndrome decoding. A zero syndrome passes the systematic bits
    // through; a tabled syndrome is corrected by its coset leader; any
    // other syndrome reports an uncorrectable frame (nullopt) and the
    // caller discards it.
    std::optional<DecodeResult> decode(Codeword received) const {
        const std::uint64_t s = syndrome(received);
        if (s == 0) return DecodeResult{received.bits >> r_, 0};
        const auto it = table_.find(s);
        if (it == table_.end()) return std::nullopt;
        const std::uint64_t corrected = received.bits ^ it->second;
        return DecodeResult{corrected >> r_, static_cast<unsigned>(std::popcount(it->second))};
    }

    // Canonical text format: "n k t" on the first line, then k rows of
    // n '0'/'1' characters in wire order.
    void save(std::ostream& os) const {
        os << n_ << ' ' << k_ << ' ' << t_ << '\n';
        for (unsigned i = 0; i < k_; ++i) {
            std::string row(n_, '0');
            for (unsigned c = 0; c < n_; ++c)
                if ((g_[i] >> (n_ - 1 - c)) & 1) row[c] = '1';
            os << row << '\n';
        }
    }

    static LinearCode load(std::istream& is) {
        unsigned n = 0, k = 0, t = 0;
        if (!(is >> n >> k >> t)) throw std::invalid_argument("bad code file: missing n k t header");
        std::vector<std::uint64_t> rows(k, 0);
        for (unsigned i = 0; i < k; ++i) {
            std::string line;
            if (!(is >> line)) throw std::invalid_argument("bad code file: missing generator row");
            if (line.size() != n) throw std::invalid_argument("bad code file: row length != n");
            for (unsigned c = 0; c < n; ++c) {
                if (line[c] == '1')
                    rows[i] |= std::uint64_t{1} << (n - 1 - c);
                else if (line[c] != '0')
                    throw std::invalid_argument("bad code file: rows must be '0'/'1'");
            }
        }
        return LinearCode(n, k, t, std::move(rows));
    }

private:
    void build_parity_check() {
        // H = [P^T | I_r] in the same wire-order bit convention as G.
        h_.assign(r_, 0);
        for (unsigned j = 0; j < r_; ++j) {
            std::uint64_t row = std::uint64_t{1} << (r_ - 1 - j);
            for (unsigned i = 0; i < k_; ++i)
                if ((g_[i] >> (r_ - 1 - j)) & 1) row |= std::uint64_t{1} << (n_ - 1 - i);
            h_[j] = row;
        }
    }

    void build_syndrome_table() {
        // Single-column syndromes; a pattern's syndrome is their xor.
        std::vector<std::uint64_t> col_syndrome(n_);
        for (unsigned c = 0; c < n_; ++c) {
            if (c < k_)
                col_syndrome[c] = g_[c] & ((std::uint64_t{1} << r_) - 1);
            else
                col_syndrome[c] = std::uint64_t{1} << (r_ - 1 - (c - k_));
        }
        table_.reserve(static_cast<std::size_t>(full_coverage_));
        table_.emplace(0, 0);
        // Weight order, so every stored pattern is a coset leader.
        for (unsigned w = 1; w <= t_; ++w) {
            detail::for_each_combination(n_, w, [&](const std::vector<unsigned>& cols) {
                std::uint64_t e = 0, s = 0;
                for (unsigned c : cols) {
                    e |= std::uint64_t{1} << (n_ - 1 - c);
                    s ^= col_syndrome[c];
                }
                table_.emplace(s, e);
            });
        }
    }

    unsigned n_, k_, r_, t_;
    unsigned d_min_ = 0;
    std::uint64_t full_coverage_ = 0;
    std::vector<std::uint64_t> g_;
    std::vector<std::uint64_t> h_;
    std::unordered_map<std::uint64_t, std::uint64_t> table_;
};

// Exhaustive minimum-distance check: the smallest weight over all
// 2^k - 1 nonzero codewords. This is the verification oracle behind
// build_code; it never samples.
inline unsigned min_distance(const LinearCode& code) {
    return detail::min_codeword_weight(code.generator_rows());
}

// Constructs a systematic (n,k) code with verified d_min >= 2t+1 by
// seeded randomized search over the parity block: random start, then
// local repair steps that re-draw a parity bit of a row contributing to
// the current minimum-weight codeword. Deterministic for a given seed.
inline LinearCode build_code(unsigned k, unsigned n, unsigned t, std::uint64_t seed) {
    if (k == 0 || n <= k) throw std::invalid_argument("require n > k > 0");
    if (n > 63) throw std::invalid_argument("codeword length limited to 63 bits");
    if (k > 28) throw std::invalid_argument("message length limited to 28 bits");
    const unsigned r = n - k;
    const unsigned target = 2 * t + 1;
    if (target > r + 1) // Singleton bound
        throw ConstructionFailed("no (n,k) code can reach d_min >= 2t+1");

    constexpr unsigned kAttempts = 32;
    constexpr unsigned kRepairSteps = 200;
    const std::uint64_t parity_mask = (std::uint64_t{1} << r) - 1;

    for (unsigned attempt = 0; attempt < kAttempts; ++attempt) {
        SplitMix64 rng(mix64(seed ^ mix64(attempt + 1)));
        std::vector<std::uint64_t> rows(k);
        for (unsigned i = 0; i < k; ++i)
            rows[i] = ((std::uint64_t{1} << (k - 1 - i)) << r) | (rng.next() & parity_mask);

        for (unsigned step = 0; step < kRepairSteps; ++step) {
            std::uint64_t weak_message = 0;
            const unsigned w = detail::min_codeword_weight(rows, &weak_message);
            if (w >= target) return LinearCode(n, k, t, std::move(rows));

            std::vector<unsigned> contributing;
            for (unsigned i = 0; i < k; ++i)
                if ((weak_message >> (k - 1 - i)) & 1) contributing.push_back(i);
            const unsigned row = contributing[rng.next_below(contributing.size())];
            rows[row] ^= std::uint64_t{1} << rng.next_below(r);
        }
    }
    throw ConstructionFailed("search budget exhausted without a d_min >= 2t+1 code");
}

} // namespace railsafe
