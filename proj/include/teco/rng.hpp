#pragma once

#include <array>
#include <cstdint>

namespace teco::rng {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). Pure integer arithmetic, so streams are
// identical on every platform and independent of evaluation order. Draws
// are addressed by (key, counter) coordinates instead of shared state,
// which is what makes sentence-parallel corruption deterministic.

struct Philox4x32 {
    static constexpr uint32_t kM0 = 0xD2511F53u;
    static constexpr uint32_t kM1 = 0xCD9E8D57u;
    static constexpr uint32_t kW0 = 0x9E3779B9u;
    static constexpr uint32_t kW1 = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         uint32_t k0, uint32_t k1) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = static_cast<uint64_t>(kM0) * ctr[0];
            const uint64_t p1 = static_cast<uint64_t>(kM1) * ctr[2];
            const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
            const uint32_t lo0 = static_cast<uint32_t>(p0);
            const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
            const uint32_t lo1 = static_cast<uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
            k0 += kW0;
            k1 += kW1;
        }
        return ctr;
    }
};

// One uniform double in [0,1) addressed by a 64-bit key and four 32-bit
// counter words. 53 effective mantissa bits.
inline double uniform_at(uint64_t key, uint32_t c0, uint32_t c1, uint32_t c2,
                         uint32_t c3) {
    const auto r = Philox4x32::block(
        {c0, c1, c2, c3}, static_cast<uint32_t>(key),
        static_cast<uint32_t>(key >> 32));
    const uint64_t bits = (static_cast<uint64_t>(r[0]) << 32) | r[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline uint64_t bits_at(uint64_t key, uint32_t c0, uint32_t c1, uint32_t c2,
                        uint32_t c3) {
    const auto r = Philox4x32::block(
        {c0, c1, c2, c3}, static_cast<uint32_t>(key),
        static_cast<uint32_t>(key >> 32));
    return (static_cast<uint64_t>(r[0]) << 32) | r[1];
}

// Sequential stream view over the counter space, for consumers that just
// need "the next draw" (BPE dropout, fixture generators). The stream id
// keeps independent substreams from colliding.
class Stream {
public:
    Stream(uint64_t key, uint64_t stream_id)
        : key_(key),
          c2_(static_cast<uint32_t>(stream_id)),
          c3_(static_cast<uint32_t>(stream_id >> 32)) {}

    double uniform() {
        const double u = uniform_at(key_, static_cast<uint32_t>(n_),
                                    static_cast<uint32_t>(n_ >> 32), c2_, c3_);
        ++n_;
        return u;
    }

    // Uniform integer in [0, n) by rejection-free scaling (n << 2^64).
    uint64_t below(uint64_t n) {
        const uint64_t b = bits_at(key_, static_cast<uint32_t>(n_),
                                   static_cast<uint32_t>(n_ >> 32), c2_, c3_);
        ++n_;
        return n ? b % n : 0;
    }

private:
    uint64_t key_;
    uint64_t n_ = 0;
    uint32_t c2_, c3_;
};

}  // namespace teco::rng
