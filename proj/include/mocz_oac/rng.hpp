#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace mocz {

/// SplitMix64 generator. Cheap to seed, which matters because every
/// (trial, user) pair gets its own stream.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    friend bool operator==(const SplitMix64&, const SplitMix64&) = default;

private:
    std::uint64_t state_;
};

using Rng = SplitMix64;

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Deterministic stream keyed by (master seed, trial, user). The same key
/// always yields the same sequence, independent of which worker runs it.
inline Rng stream(std::uint64_t master, std::uint64_t trial, std::uint64_t user = 0) noexcept
{
    std::uint64_t h = detail::mix64(master + 0x9E3779B97F4A7C15ULL);
    h = detail::mix64(h ^ (trial + 0xD1B54A32D192ED03ULL));
    h = detail::mix64(h ^ (user + 0x8CB92BA72F3D8DD7ULL));
    return Rng(h);
}

/// Circularly symmetric complex Gaussian with the given total variance.
template <class Urbg>
std::complex<double> complex_gaussian(Urbg& rng, double variance)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

template <class Urbg>
double uniform(Urbg& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace mocz
