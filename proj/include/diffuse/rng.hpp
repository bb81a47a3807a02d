#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "diffuse/grid.hpp"

namespace diffuse {

// Counter-based stream (Philox4x32-10). A stream is identified by
// (seed, stream id); draws walk a 64-bit block counter, so identical seed and
// call sequence reproduce identical outputs bit-exactly. split() derives an
// independent child stream without disturbing the parent, which is how
// parallel chains get their own reproducible randomness.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    RngStream split(std::uint64_t child) const;

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double uniform();

    // Uniform over {0, ..., n-1}.
    int uniform_int(int n);

    // Standard normal via Box-Muller; values are produced in pairs and the
    // spare is cached, so scalar and bulk draws share one sequence.
    double normal();

    void fill_normal(std::span<double> out);

    // Raw Philox4x32-10 block; exposed for the known-answer tests.
    static std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                   std::array<std::uint32_t, 2> key);

private:
    std::array<std::uint32_t, 4> next_block();

    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;  // 4 = empty
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

Grid gaussian_noise(const Shape& shape, RngStream& rng);

}  // namespace diffuse
