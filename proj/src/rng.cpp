#include "pclab/rng.hpp"

#include <cmath>
#include <numbers>

namespace pclab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), stream_(stream_index)
{
}

void RngStream::refill()
{
    const std::array<std::uint32_t, 4> counter{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32_10(counter, key);
    ++block_;
    used_ = 0;
}

std::uint32_t RngStream::next_u32()
{
    if (used_ == 4)
        refill();
    return buffer_[static_cast<std::size_t>(used_++)];
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::angle()
{
    return 2.0 * std::numbers::pi * uniform();
}

double RngStream::normal()
{
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open_left()));
    const double theta = angle();
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

std::complex<double> RngStream::complex_normal()
{
    // Box-Muller pair scaled by 1/sqrt(2): sqrt(-2 ln u)/sqrt(2) = sqrt(-ln u).
    const double r = std::sqrt(-std::log(uniform_open_left()));
    const double theta = angle();
    return {r * std::cos(theta), r * std::sin(theta)};
}

} // namespace pclab
