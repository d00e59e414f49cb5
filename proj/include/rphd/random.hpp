#pragma once

#include <cstdint>
#include <random>

namespace rphd {

/// Purposes that own an independent random stream. Enabling a roughening
/// strategy only ever draws from `Jitter`, so every other draw is unaffected.
enum class Stream : std::uint64_t {
    Truth = 1,
    Detection = 2,
    MeasurementNoise = 3,
    Clutter = 4,
    Shuffle = 5,
    Propagation = 16,
    Birth = 17,
    Resampling = 18,
    Jitter = 19,
    Extraction = 20,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept {
    return mix64(mix64(base) ^ (tag * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream) noexcept {
    return derive_seed(base, static_cast<std::uint64_t>(stream));
}

/// Seeded Mersenne-Twister stream with the handful of draws the library needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t base, Stream stream) : engine_(derive_seed(base, stream)) {}

    double normal() { return normal_(engine_); }
    double normal(double mean, double stddev) { return mean + stddev * normal_(engine_); }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n).
    std::uint64_t index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// The filter-side streams used by one filter instance.
struct FilterStreams {
    Rng propagation;
    Rng birth;
    Rng resampling;
    Rng jitter;
    Rng extraction;

    explicit FilterStreams(std::uint64_t base)
        : propagation(base, Stream::Propagation),
          birth(base, Stream::Birth),
          resampling(base, Stream::Resampling),
          jitter(base, Stream::Jitter),
          extraction(base, Stream::Extraction) {}
};

}  // namespace rphd
