#pragma once

#include <array>
#include <cstdint>

namespace superres {

/// Philox4x32-10 block: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Algorithm identity written into result metadata.
inline constexpr const char *kRngAlgorithm = "philox4x32-10";

/// Counter-based random stream. The key is the run seed, the high half of the
/// counter is the stream index and the low half counts blocks, so any
/// (seed, stream_index) pair yields the same sequence regardless of which
/// thread evaluates it or in what order.
class RngStream {
   public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index) : seed_(seed), stream_index_(stream_index) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

   private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;  // in 32-bit words
};

}  // namespace superres
