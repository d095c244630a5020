#pragma once

#include <cstdint>
#include <random>

namespace csd {

// Seeded, splittable random stream. The contract: identical
// (seed, stream_id, substream) yields the identical draw sequence on every
// run and under every thread schedule, and distinct ids yield statistically
// independent streams. Internally a mt19937_64 seeded from a splitmix64
// mix of the identifiers; all variate transforms are done here so the
// sequence does not depend on the standard library's distribution
// implementations.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream = 0);

    // Independent child stream (e.g. one per panel unit).
    RngStream derive(std::uint64_t idx) const;

    // Uniform on (0, 1).
    double uniform();
    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);
    // Standard normal via Marsaglia polar method.
    double normal();
    // chi-square with df degrees of freedom, as a sum of squared normals.
    double chi2(int df);
    // Student t with df degrees of freedom.
    double t(int df);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    explicit RngStream(std::uint64_t key);

    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t key_ = 0;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace csd
