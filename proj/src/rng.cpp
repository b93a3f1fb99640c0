#include "chemowall/rng.hpp"

#include <cmath>
#include <numbers>

namespace chemowall {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

std::array<double, 2> GaussianStream::pair(std::uint64_t block) const noexcept {
    const auto out = philox4x32(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), stream_, 0u},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    const std::uint64_t b0 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b1 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    // Box-Muller
    const double r = std::sqrt(-2.0 * std::log(to_open_unit(b0)));
    const double theta = 2.0 * std::numbers::pi * to_open_unit(b1);
    return {r * std::cos(theta), r * std::sin(theta)};
}

double GaussianStream::operator()(std::uint64_t index) const noexcept {
    return pair(index / 2)[index % 2];
}

void GaussianStream::fill(std::span<double> out, std::uint64_t first) const noexcept {
    std::size_t i = 0;
    std::uint64_t index = first;
    if (index % 2 == 1 && i < out.size()) {
        out[i++] = pair(index / 2)[1];
        ++index;
    }
    for (; i + 1 < out.size(); i += 2, index += 2) {
        const auto p = pair(index / 2);
        out[i] = p[0];
        out[i + 1] = p[1];
    }
    if (i < out.size()) out[i] = pair(index / 2)[0];
}

}  // namespace chemowall
