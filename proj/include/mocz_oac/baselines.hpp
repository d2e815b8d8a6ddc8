#pragma once

// Reference over-the-air schemes: Goldenbaum's non-coherent energy
// estimator and one-bit broadband digital aggregation (OBDA) with
// truncated channel inversion.

#include <cmath>
#include <numbers>
#include <span>

#include "channel.hpp"
#include "encoders.hpp"
#include "errors.hpp"
#include "huffman.hpp"
#include "rng.hpp"

namespace mocz {

/// Nearest integer of (K+1)/log2(K).
inline int goldenbaum_default_length(int K)
{
    detail::require(K >= 2, "goldenbaum_default_length: K must be >= 2");
    return static_cast<int>(std::lround((K + 1) / std::log2(static_cast<double>(K))));
}

struct GoldenbaumConfig {
    int seq_len = 7;
    double noise_var = 0.0;
    int users = 1;
};

/// sqrt(s) times a unimodular sequence with i.i.d. uniform phases, where
/// s = 0 for vote -1 and s = 2 for vote +1.
template <class Urbg>
ComplexVec goldenbaum_encode(int vote, int seq_len, Urbg& rng)
{
    detail::require(vote == 1 || vote == -1, "goldenbaum_encode: vote must be +-1");
    detail::require(seq_len >= 1, "goldenbaum_encode: sequence length must be positive");
    ComplexVec x(seq_len, cplx{0.0, 0.0});
    if (vote < 0)
        return x;
    const double amp = std::sqrt(2.0);
    for (auto& v : x)
        v = std::polar(amp, uniform(rng, 0.0, 2.0 * std::numbers::pi));
    return x;
}

/// (||y||^2 - |y| sigma^2) / L_seq - U, an unbiased estimate of N+ - N-.
/// The noise term covers every received sample, so the multipath window of
/// L_seq + L_e - 1 samples is handled the same way as the flat case.
inline double goldenbaum_statistic(std::span<const cplx> y, const GoldenbaumConfig& cfg)
{
    detail::require_shape(static_cast<int>(y.size()) >= cfg.seq_len, "goldenbaum: received window too short");
    const double noise_energy = static_cast<double>(y.size()) * cfg.noise_var;
    return (energy(y) - noise_energy) / cfg.seq_len - cfg.users;
}

inline int goldenbaum_decode(std::span<const cplx> y, const GoldenbaumConfig& cfg)
{
    const double s = goldenbaum_statistic(y, cfg);
    return (s > 0.0) - (s < 0.0);
}

struct ObdaConfig {
    double truncation = 0.2;
    double phase_error_deg = 120.0;
    bool phase_errors = false;
    /// Without CSI the nodes cannot pre-equalize and send plain BPSK.
    bool channel_inversion = true;
};

/// BPSK symbol pre-equalized by h*/|h|^2, or silence when |h|^2 is at or
/// below the truncation level.
template <class Urbg>
cplx obda_encode(int vote, cplx h, const ObdaConfig& cfg, Urbg& rng)
{
    detail::require(vote == 1 || vote == -1, "obda_encode: vote must be +-1");
    detail::require(cfg.truncation >= 0.0, "obda_encode: truncation threshold must be nonnegative");
    cplx s{static_cast<double>(vote), 0.0};
    if (cfg.channel_inversion) {
        const double g = std::norm(h);
        if (g <= cfg.truncation)
            return {0.0, 0.0};
        s *= std::conj(h) / g;
    }
    if (cfg.phase_errors) {
        const double w = cfg.phase_error_deg * std::numbers::pi / 180.0;
        s *= std::polar(1.0, uniform(rng, -w, w));
    }
    return s;
}

inline int obda_decode(cplx y) { return (y.real() > 0.0) - (y.real() < 0.0); }

} // namespace mocz
