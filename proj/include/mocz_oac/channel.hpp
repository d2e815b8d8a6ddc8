#pragma once

// Multipath Rayleigh channel with an exponential power-delay profile,
// linear superposition of user sequences and additive noise.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "huffman.hpp"
#include "rng.hpp"

namespace mocz {

/// Tap powers p_l = (1-rho)/(1-rho^Le) rho^l, or 1/Le when rho = 1.
inline std::vector<double> pdp(int taps, double rho)
{
    detail::require(taps >= 1, "pdp: L_e must be >= 1");
    detail::require(rho > 0.0 && rho <= 1.0, "pdp: rho must lie in (0, 1]");
    std::vector<double> p(taps);
    if (rho == 1.0) {
        for (auto& v : p)
            v = 1.0 / taps;
        return p;
    }
    const double scale = (1.0 - rho) / (1.0 - std::pow(rho, taps));
    for (int l = 0; l < taps; ++l)
        p[l] = scale * std::pow(rho, l);
    return p;
}

struct PdpConfig {
    int taps = 1;
    double rho = 1.0;

    std::vector<double> powers() const { return pdp(taps, rho); }
};

/// U x L_e tap gains, row-major.
class ChannelRealization {
public:
    ChannelRealization() = default;
    ChannelRealization(int users, int taps) : users_(users), taps_(taps), h_(static_cast<std::size_t>(users) * taps)
    {
        detail::require(users >= 1 && taps >= 1, "ChannelRealization: dimensions must be positive");
    }
    ChannelRealization(int users, int taps, ComplexVec h) : users_(users), taps_(taps), h_(std::move(h))
    {
        detail::require_shape(h_.size() == static_cast<std::size_t>(users) * taps,
                              "ChannelRealization: tap count mismatch");
    }

    /// All users see a flat unit channel.
    static ChannelRealization flat(int users) { return {users, 1, ComplexVec(users, cplx{1.0, 0.0})}; }

    int users() const noexcept { return users_; }
    int taps() const noexcept { return taps_; }

    std::span<const cplx> user(int u) const
    {
        return {h_.data() + static_cast<std::size_t>(u) * taps_, static_cast<std::size_t>(taps_)};
    }
    std::span<cplx> user(int u)
    {
        return {h_.data() + static_cast<std::size_t>(u) * taps_, static_cast<std::size_t>(taps_)};
    }

private:
    int users_ = 0;
    int taps_ = 0;
    ComplexVec h_;
};

/// One user's taps, h_l ~ CN(0, p_l).
template <class Urbg>
ComplexVec sample_taps(std::span<const double> powers, Urbg& rng)
{
    ComplexVec h(powers.size());
    for (std::size_t l = 0; l < powers.size(); ++l)
        h[l] = complex_gaussian(rng, powers[l]);
    return h;
}

template <class Urbg>
ChannelRealization sample_channel(const PdpConfig& cfg, int users, Urbg& rng)
{
    const auto p = cfg.powers();
    ChannelRealization ch(users, cfg.taps);
    for (int u = 0; u < users; ++u) {
        auto row = ch.user(u);
        for (int l = 0; l < cfg.taps; ++l)
            row[l] = complex_gaussian(rng, p[l]);
    }
    return ch;
}

using ReceivedSequence = ComplexVec;

/// Adds h * x (zero-padded linear convolution) into acc.
inline void convolve_add(std::span<const cplx> x, std::span<const cplx> h, std::span<cplx> acc)
{
    detail::require_shape(acc.size() + 1 == x.size() + h.size(), "convolve_add: output length mismatch");
    for (std::size_t l = 0; l < h.size(); ++l) {
        const cplx g = h[l];
        for (std::size_t n = 0; n < x.size(); ++n)
            acc[n + l] += g * x[n];
    }
}

/// y_n = sum_u sum_l h_{u,l} x_{u,n-l}, without noise.
inline ReceivedSequence superpose_noiseless(std::span<const ComplexVec> sequences, const ChannelRealization& channels)
{
    detail::require_shape(!sequences.empty(), "superpose: no sequences");
    detail::require_shape(static_cast<int>(sequences.size()) == channels.users(),
                          "superpose: " + std::to_string(sequences.size()) + " sequences but " +
                              std::to_string(channels.users()) + " channels");
    const std::size_t len = sequences.front().size();
    for (const auto& s : sequences)
        detail::require_shape(s.size() == len && len > 0, "superpose: sequences must share a nonzero length");
    ReceivedSequence y(len + channels.taps() - 1, cplx{0.0, 0.0});
    for (std::size_t u = 0; u < sequences.size(); ++u)
        convolve_add(sequences[u], channels.user(static_cast<int>(u)), y);
    return y;
}

template <class Urbg>
void add_noise(std::span<cplx> y, double noise_var, Urbg& rng)
{
    detail::require(noise_var >= 0.0, "noise variance must be nonnegative");
    if (noise_var == 0.0)
        return;
    for (auto& v : y)
        v += complex_gaussian(rng, noise_var);
}

/// Superposition plus w_n ~ CN(0, noise_var). Output length is
/// len + L_e - 1, i.e. K + L_e for length-(K+1) sequences.
template <class Urbg>
ReceivedSequence superpose(std::span<const ComplexVec> sequences, const ChannelRealization& channels,
                           double noise_var, Urbg& rng)
{
    auto y = superpose_noiseless(sequences, channels);
    add_noise(y, noise_var, rng);
    return y;
}

inline double snr_db_to_noise_var(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

} // namespace mocz
