#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace chemowall {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: output depends
/// only on (counter, key), which is what makes per-index draws order-independent.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; bijective 64-bit mixing.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-member seed of an ensemble: splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Counter-based Gaussian source keyed by (seed, stream). The k-th variate is
/// a pure function of (seed, stream, k).
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint32_t stream) noexcept
        : seed_(seed), stream_(stream) {}

    double operator()(std::uint64_t index) const noexcept;

    /// Writes variates first, first+1, ... into out.
    void fill(std::span<double> out, std::uint64_t first = 0) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint32_t stream() const noexcept { return stream_; }

private:
    std::array<double, 2> pair(std::uint64_t block) const noexcept;

    std::uint64_t seed_;
    std::uint32_t stream_;
};

}  // namespace chemowall
