#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace nlcsim {

/// Philox4x32-10 counter-based block generator. Streams are identified by a
/// 64-bit key; outputs depend only on (key, counter), so any (seed, purpose,
/// index...) tuple maps to an independent, reproducible stream regardless of
/// scheduling or worker count.
struct Philox4x32 {
    static std::array<uint32_t, 4> block(std::array<uint32_t, 2> key,
                                         std::array<uint32_t, 4> ctr);
};

uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ull);
uint64_t fnv1a64_u64(uint64_t v, uint64_t h);

/// One logical random stream: key derived from (seed, purpose, idx0, idx1),
/// counter advances per block.
class RandomStream {
public:
    RandomStream(uint64_t seed, std::string_view purpose, uint64_t idx0 = 0,
                 uint64_t idx1 = 0);

    uint32_t next_u32();
    uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal (Box-Muller).
    double gaussian();

private:
    void refill();

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 4> buf_;
    int avail_ = 0;
    double cached_gauss_ = 0.0;
    bool has_cached_gauss_ = false;
};

} // namespace nlcsim
