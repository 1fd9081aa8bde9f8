#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace pclab {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure function of
/// (counter, key); the basis of every random stream in the library.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The key is the master seed and the high half
/// of the counter is the stream index, so streams with different
/// (master_seed, stream_index) never overlap and the produced sequence does
/// not depend on platform or on which thread draws it.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_open_left() { return 1.0 - uniform(); }
    /// Uniform phase angle on [0, 2*pi).
    double angle();
    /// Standard real normal (Box-Muller; the second variate is cached).
    double normal();
    /// (g1 + i g2) / sqrt(2) with g1, g2 standard normal, so E|z|^2 = 1.
    std::complex<double> complex_normal();

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace pclab
