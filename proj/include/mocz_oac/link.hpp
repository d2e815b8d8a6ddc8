#pragma once

// End-to-end link description and one Monte Carlo trial of the
// encode -> superpose -> decode chain.

#include <cstdint>
#include <vector>

#include "channel.hpp"
#include "dizet.hpp"
#include "encoders.hpp"
#include "huffman.hpp"
#include "rng.hpp"

namespace mocz {

struct LinkConfig {
    Method method = Method::IndexBased;
    int K = 8;
    PdpConfig pdp{};
    double noise_var = 0.1;

    RadiusParam rp() const { return radius_param(K); }
    int votes() const { return votes_per_codeword(method, K); }
    DecoderContext decoder() const { return DecoderContext::make(method, rp(), pdp, noise_var); }
};

/// Votes with column `ell` fixed to n_plus leading +1 entries followed by
/// -1 entries; every other entry is an independent fair +-1 draw.
template <class Urbg>
VoteMatrix sample_votes(int users, int votes, int ell, int n_plus, Urbg& rng)
{
    detail::require(n_plus >= 0 && n_plus <= users, "sample_votes: n_plus out of range");
    detail::require(ell >= 0 && ell < votes, "sample_votes: vote index out of range");
    VoteMatrix v(users, votes);
    for (int u = 0; u < users; ++u)
        for (int l = 0; l < votes; ++l)
            v.set(u, l, l == ell ? (u < n_plus ? 1 : -1) : ((rng() >> 63) ? 1 : -1));
    return v;
}

/// Reusable state for repeated trials at a fixed configuration.
class LinkSimulator {
public:
    explicit LinkSimulator(const LinkConfig& cfg)
        : cfg_(cfg), rp_(cfg.rp()), conv_(cfg.K), ctx_(cfg.decoder()), powers_(cfg.pdp.powers())
    {
    }

    const LinkConfig& config() const noexcept { return cfg_; }
    const ZeroToCoeffConverter& converter() const noexcept { return conv_; }

    std::vector<CoefficientSequence> encode(const VoteMatrix& votes) const
    {
        return encode_users(cfg_.method, votes, rp_, conv_);
    }

    /// Draws channels from the per-user streams and noise from stream U.
    ReceivedSequence receive(const std::vector<CoefficientSequence>& coeffs, std::uint64_t seed,
                             std::uint64_t trial) const
    {
        const int users = static_cast<int>(coeffs.size());
        ChannelRealization ch(users, cfg_.pdp.taps);
        for (int u = 0; u < users; ++u) {
            auto rng = stream(seed, trial, static_cast<std::uint64_t>(u));
            auto row = ch.user(u);
            for (std::size_t l = 0; l < powers_.size(); ++l)
                row[l] = complex_gaussian(rng, powers_[l]);
        }
        auto noise_rng = stream(seed, trial, static_cast<std::uint64_t>(users));
        return superpose(std::span<const ComplexVec>(coeffs), ch, cfg_.noise_var, noise_rng);
    }

    MvDecision decode(const ReceivedSequence& y) const { return mocz::decode(y, ctx_); }

private:
    LinkConfig cfg_;
    RadiusParam rp_;
    ZeroToCoeffConverter conv_;
    DecoderContext ctx_;
    std::vector<double> powers_;
};

/// True when the decision for vote `ell` is wrong; ties always count as errors.
inline bool is_computation_error(int decision, int n_plus, int users)
{
    const int truth = (2 * n_plus > users) - (2 * n_plus < users);
    return truth == 0 || decision != truth;
}

} // namespace mocz
