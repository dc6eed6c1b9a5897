// Counter-based pseudo-random generator: Philox2x64-10 (Salmon, Moraes,
// Dror, Shaw, SC'11).  Chosen because replica reproducibility needs cheap
// independent streams: stream s of master seed m is the keyed bijection
// applied to counters (c, s), so any replica can be regenerated in isolation
// and checkpoints only store (key, stream, counter, phase).
#pragma once

#include <cmath>
#include <cstdint>

namespace zrl {

class philox2x64 {
  public:
    philox2x64() = default;
    philox2x64(std::uint64_t key, std::uint64_t stream)
        : key_(key), stream_(stream) {}

    std::uint64_t next_u64() {
        if (phase_ == 0) {
            block();
            phase_ = 1;
            return out_[0];
        }
        phase_ = 0;
        ++counter_;
        return out_[1];
    }

    // uniform in [0,1): 53 random mantissa bits
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0,1], safe as an argument of log
    double next_double_pos() { return 1.0 - next_double(); }

    double next_exponential(double rate) {
        return -std::log(next_double_pos()) / rate;
    }

    // resume support: (key, stream) identify the sequence, (counter, phase)
    // the position within it
    struct state {
        std::uint64_t key = 0, stream = 0, counter = 0;
        int phase = 0;
    };
    state save() const { return {key_, stream_, counter_, phase_}; }
    void restore(const state& s) {
        key_ = s.key;
        stream_ = s.stream;
        counter_ = s.counter;
        phase_ = s.phase;
        if (phase_ == 1) block();  // regenerate the half-consumed block
    }

  private:
    static constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ull;
    static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

    void block() {
        std::uint64_t x0 = counter_, x1 = stream_, k = key_;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 prod =
                static_cast<unsigned __int128>(kMul) * x0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            x0 = hi ^ k ^ x1;
            x1 = lo;
            k += kWeyl;
        }
        out_[0] = x0;
        out_[1] = x1;
    }

    std::uint64_t key_ = 0, stream_ = 0, counter_ = 0;
    std::uint64_t out_[2] = {0, 0};
    int phase_ = 0;
};

using rng = philox2x64;

}  // namespace zrl
