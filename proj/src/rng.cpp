#include "csd/rng.hpp"

#include <cmath>

namespace csd {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ mix64(b + 0x632be59bd9b4e019ULL)); }

std::mt19937_64 make_engine(std::uint64_t key) {
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(mix64(key)), static_cast<std::uint32_t>(mix64(key) >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t key) : key_(key), engine_(make_engine(key)) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream)
    : seed_(seed), stream_id_(stream_id), key_(combine(combine(seed, stream_id), substream)),
      engine_(make_engine(key_)) {}

RngStream RngStream::derive(std::uint64_t idx) const {
    RngStream child(combine(key_, idx));
    child.seed_ = seed_;
    child.stream_id_ = stream_id_;
    return child;
}

double RngStream::uniform() {
    // 53-bit mantissa; shifted so the result is strictly inside (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    // Rejection sampling over the top range to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double RngStream::chi2(int df) {
    double s = 0.0;
    for (int k = 0; k < df; ++k) {
        const double z = normal();
        s += z * z;
    }
    return s;
}

double RngStream::t(int df) { return normal() / std::sqrt(chi2(df) / static_cast<double>(df)); }

}  // namespace csd
