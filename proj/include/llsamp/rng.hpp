#pragma once

#include <array>
#include <cstdint>

namespace llsamp {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless mixing of (key=seed, counter=(block, stream)) gives
// reproducible, order-independent substreams: stream s, block b always
// yields the same 128-bit output block for a fixed seed.
class PhiloxRng {
public:
    explicit PhiloxRng(uint64_t seed, uint64_t stream = 0)
        : stream_(stream), key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)} {}

    uint64_t next_u64() {
        if (avail_ < 2) refill();
        avail_ -= 2;
        uint64_t lo = block_[avail_];
        uint64_t hi = block_[avail_ + 1];
        return (hi << 32) | lo;
    }

    // Uniform in [0,1) with exactly 53 random bits.
    double uniform53() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform index in [0, n) by rejection.
    uint32_t uniform_index(uint32_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
        for (;;) {
            uint64_t u = next_u64();
            if (u <= limit) return static_cast<uint32_t>(u % n);
        }
    }

    bool fair_bit() { return (next_u64() & 1u) != 0; }

private:
    static void round(std::array<uint32_t, 4>& c, uint32_t k0, uint32_t k1) {
        const uint64_t m0 = 0xD2511F53ull * c[0];
        const uint64_t m1 = 0xCD9E8D57ull * c[2];
        c = {static_cast<uint32_t>(m1 >> 32) ^ c[1] ^ k0, static_cast<uint32_t>(m1),
             static_cast<uint32_t>(m0 >> 32) ^ c[3] ^ k1, static_cast<uint32_t>(m0)};
    }

    void refill() {
        std::array<uint32_t, 4> c = {static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32),
                                     static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
        uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            round(c, k0, k1);
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        block_ = c;
        ++counter_;
        avail_ = 4;
    }

    std::array<uint32_t, 4> block_{};
    uint64_t counter_ = 0;
    uint64_t stream_;
    uint32_t key_[2];
    int avail_ = 0;
};

}  // namespace llsamp
