#include "nlcsim/rng.hpp"

#include <cmath>

namespace nlcsim {

namespace {
constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = uint64_t(a) * uint64_t(b);
    hi = uint32_t(p >> 32);
    lo = uint32_t(p);
}
} // namespace

std::array<uint32_t, 4> Philox4x32::block(std::array<uint32_t, 2> key,
                                          std::array<uint32_t, 4> ctr) {
    for (int round = 0; round < 10; ++round) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

uint64_t fnv1a64(std::string_view s, uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t fnv1a64_u64(uint64_t v, uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ull;
    }
    return h;
}

RandomStream::RandomStream(uint64_t seed, std::string_view purpose, uint64_t idx0,
                           uint64_t idx1) {
    uint64_t k = fnv1a64(purpose);
    k = fnv1a64_u64(seed, k);
    k = fnv1a64_u64(idx0, k);
    key_ = {uint32_t(k), uint32_t(k >> 32)};
    ctr_ = {0, 0, uint32_t(idx1), uint32_t(idx1 >> 32)};
}

void RandomStream::refill() {
    buf_ = Philox4x32::block(key_, ctr_);
    avail_ = 4;
    if (++ctr_[0] == 0) ++ctr_[1]; // 64-bit block counter in ctr[0..1]
}

uint32_t RandomStream::next_u32() {
    if (avail_ == 0) refill();
    return buf_[4 - avail_--];
}

uint64_t RandomStream::next_u64() {
    uint64_t lo = next_u32();
    uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RandomStream::uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
    if (has_cached_gauss_) {
        has_cached_gauss_ = false;
        return cached_gauss_;
    }
    // u1 in (0, 1] so the log is finite
    double u1 = (double(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_gauss_ = r * std::sin(a);
    has_cached_gauss_ = true;
    return r * std::cos(a);
}

} // namespace nlcsim
