#pragma once

// Oversampled time-domain signals of coefficient sequences and their
// peak-to-mean envelope power ratio, plus resource accounting.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "encoders.hpp"
#include "errors.hpp"
#include "huffman.hpp"

namespace mocz {

struct TimeDomainSignal {
    ComplexVec samples;
    int oversampling = 16;
};

namespace detail {

// Unitary inverse transform of size n with only bins 0..bins.size()-1 occupied.
inline ComplexVec sparse_idft(std::span<const cplx> bins, int n)
{
    ComplexVec s(n, cplx{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cplx> rot(n);
    for (int m = 0; m < n; ++m)
        rot[m] = unit_root(m, n);
    for (int m = 0; m < n; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < bins.size(); ++k)
            acc += bins[k] * rot[(static_cast<std::size_t>(m) * k) % n];
        s[m] = acc * scale;
    }
    return s;
}

} // namespace detail

/// (K+1)-point unitary DFT of the coefficients mapped to bins 0..K of an
/// oversampling*(K+1)-point unitary IDFT.
inline TimeDomainSignal dfts_ofdm_modulate(std::span<const cplx> coeffs, int oversampling = 16)
{
    detail::require(!coeffs.empty(), "dfts_ofdm_modulate: empty input");
    detail::require(oversampling >= 1, "dfts_ofdm_modulate: oversampling must be positive");
    const int n = static_cast<int>(coeffs.size());
    ComplexVec freq(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (int m = 0; m < n; ++m)
            acc += coeffs[m] * std::conj(unit_root(static_cast<std::int64_t>(k) * m, n));
        freq[k] = acc * scale;
    }
    return {detail::sparse_idft(freq, oversampling * n), oversampling};
}

/// Coefficients placed directly on K+1 contiguous subcarriers.
inline TimeDomainSignal ofdm_map_modulate(std::span<const cplx> coeffs, int oversampling = 16)
{
    detail::require(!coeffs.empty(), "ofdm_map_modulate: empty input");
    detail::require(oversampling >= 1, "ofdm_map_modulate: oversampling must be positive");
    const int n = static_cast<int>(coeffs.size());
    return {detail::sparse_idft(coeffs, oversampling * n), oversampling};
}

/// 10 log10(max |s|^2 / mean |s|^2) in dB.
inline double pmepr(std::span<const cplx> s)
{
    detail::require(!s.empty(), "pmepr: empty signal");
    double peak = 0.0, sum = 0.0;
    for (const auto& v : s) {
        const double p = std::norm(v);
        peak = std::max(peak, p);
        sum += p;
    }
    detail::require(sum > 0.0, "pmepr: all-zero signal");
    return 10.0 * std::log10(peak * static_cast<double>(s.size()) / sum);
}

inline double pmepr(const TimeDomainSignal& s) { return pmepr(s.samples); }

/// Complex resources per majority vote: (K + L_e) / M.
inline double resources_per_mv(Method m, int K, int taps)
{
    detail::require(taps >= 0, "resources_per_mv: L_e must be nonnegative");
    return static_cast<double>(K + taps) / votes_per_codeword(m, K);
}

/// Separate communication: U one-bit votes at the given spectral efficiency.
inline double separation_resources_per_mv(int users, double efficiency = 1.0)
{
    detail::require(users >= 1 && efficiency > 0.0, "separation_resources_per_mv: bad arguments");
    return users / efficiency;
}

/// Smallest U for which the method needs fewer resources per MV than separation.
inline int separation_crossover_users(Method m, int K, int taps, double efficiency = 1.0)
{
    const double r = resources_per_mv(m, K, taps);
    int users = 1;
    while (separation_resources_per_mv(users, efficiency) <= r)
        ++users;
    return users;
}

} // namespace mocz
