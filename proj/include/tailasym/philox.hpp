#ifndef TAILASYM_PHILOX_HPP
#define TAILASYM_PHILOX_HPP

#include <array>
#include <cstdint>

namespace tailasym {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).  A block is a
// pure function of (counter, key), so draws can be indexed by
// (seed, replicate, sample, block) and the result never depends on how the
// samples are scheduled across threads.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> x,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += W0;
            k1 += W1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * x[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * x[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    }
    return x;
}

/// Stream of unit uniforms for one (seed, replicate, sample) triple.  Each
/// Philox block yields two doubles with full 53-bit mantissas, strictly
/// inside (0, 1).
class PhiloxStream {
  public:
    PhiloxStream(std::uint64_t seed, std::uint32_t replicate,
                 std::uint64_t sample)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          base_{0u, static_cast<std::uint32_t>(sample),
                static_cast<std::uint32_t>(sample >> 32), replicate} {}

    double next() {
        if (have_ == 0) refill();
        return buf_[--have_];
    }

  private:
    static double to_unit(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t mant =
            (static_cast<std::uint64_t>(a >> 6) << 27) | (b >> 5);
        return (static_cast<double>(mant) + 0.5) * 0x1.0p-53;
    }

    void refill() {
        auto ctr = base_;
        ctr[0] = block_++;
        const auto out = philox4x32(ctr, key_);
        buf_[1] = to_unit(out[0], out[1]);
        buf_[0] = to_unit(out[2], out[3]);
        have_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::uint32_t block_ = 0;
    int have_ = 0;
    double buf_[2] = {0.0, 0.0};
};

/// SplitMix64 step, used to derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace tailasym

#endif
