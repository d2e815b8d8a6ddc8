#pragma once

// Distributed median computation: each device votes on the sign of
// (estimate - local parameter) and the receiver moves the estimate against
// the majority vote with a linearly decaying step.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "baselines.hpp"
#include "channel.hpp"
#include "dizet.hpp"
#include "encoders.hpp"
#include "errors.hpp"
#include "link.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace mocz {

struct MedianState {
    std::vector<double> estimates;
    double mu_start = 0.01;
    double mu_end = 1e-5;
    int rounds = 500;
    int iteration = 0;

    /// Step size at the current iteration, linear from mu_start to mu_end.
    double mu() const
    {
        if (rounds <= 1)
            return mu_start;
        const double f = std::min(1.0, static_cast<double>(iteration) / (rounds - 1));
        return mu_start + (mu_end - mu_start) * f;
    }
};

inline MedianState make_median_state(int params, int rounds, double mu_start = 0.01, double mu_end = 1e-5)
{
    detail::require(params >= 1 && rounds >= 1, "MedianState: need parameters and rounds");
    detail::require(mu_start > 0.0 && mu_end > 0.0, "MedianState: learning rates must be positive");
    return {std::vector<double>(params, 0.0), mu_start, mu_end, rounds, 0};
}

/// U x M device parameters s_{l,u}, row-major by device.
struct DeviceParams {
    int users = 0;
    int params = 0;
    std::vector<double> values;

    double operator()(int u, int l) const { return values[static_cast<std::size_t>(u) * params + l]; }

    double median(int l) const
    {
        std::vector<double> col(users);
        for (int u = 0; u < users; ++u)
            col[u] = (*this)(u, l);
        std::sort(col.begin(), col.end());
        return users % 2 ? col[users / 2] : 0.5 * (col[users / 2 - 1] + col[users / 2]);
    }
};

template <class Urbg>
DeviceParams sample_device_params(int users, int params, Urbg& rng)
{
    detail::require(users >= 1 && params >= 1, "sample_device_params: bad dimensions");
    DeviceParams p{users, params, std::vector<double>(static_cast<std::size_t>(users) * params)};
    const double w = std::sqrt(3.0);
    for (auto& v : p.values)
        v = uniform(rng, -w, w);
    return p;
}

/// v_{u,l} = sign(c_l - s_{l,u}) with sign(0) taken as +1.
inline std::vector<int> local_votes(const MedianState& state, const DeviceParams& params, int l)
{
    std::vector<int> v(params.users);
    for (int u = 0; u < params.users; ++u)
        v[u] = state.estimates.at(l) - params(u, l) >= 0.0 ? 1 : -1;
    return v;
}

/// c_l <- c_l - mu * mv_l, then advance the step schedule.
inline MedianState median_step(MedianState state, std::span<const int> mv)
{
    detail::require_shape(mv.size() == state.estimates.size(), "median_step: decision count mismatch");
    const double mu = state.mu();
    for (std::size_t l = 0; l < mv.size(); ++l)
        state.estimates[l] -= mu * mv[l];
    ++state.iteration;
    return state;
}

enum class Backend : std::uint8_t { Ideal, Method1, Method2, Method3, Goldenbaum, Obda };

inline std::string_view backend_name(Backend b)
{
    switch (b) {
    case Backend::Ideal:
        return "ideal";
    case Backend::Method1:
        return "method1";
    case Backend::Method2:
        return "method2";
    case Backend::Method3:
        return "method3";
    case Backend::Goldenbaum:
        return "goldenbaum";
    case Backend::Obda:
        return "obda";
    }
    return "?";
}

inline Backend parse_backend(std::string_view s)
{
    for (auto b : {Backend::Ideal, Backend::Method1, Backend::Method2, Backend::Method3, Backend::Goldenbaum,
                   Backend::Obda})
        if (backend_name(b) == s)
            return b;
    throw invalid_parameter("unknown backend '" + std::string(s) + "'");
}

inline Method backend_method(Backend b)
{
    switch (b) {
    case Backend::Method1:
        return Method::Uncoded;
    case Backend::Method2:
        return Method::Differential;
    case Backend::Method3:
        return Method::IndexBased;
    default:
        throw invalid_parameter("backend is not a zero-modulation method");
    }
}

struct MedianConfig {
    Backend backend = Backend::Method3;
    int users = 25;
    int K = 8;
    /// Parameter count for Ideal/Goldenbaum/OBDA; the zero-modulation methods
    /// use their per-codeword vote count. 0 means log2(K).
    int params = 0;
    int rounds = 500;
    double mu_start = 0.01;
    double mu_end = 1e-5;
    PdpConfig pdp{};
    double snr_db = 10.0;
    int realizations = 100;
    std::uint64_t seed = 1;
    int goldenbaum_len = 0; // 0: nearest integer of (K+1)/log2(K)
    ObdaConfig obda{};
    int threads = 1;

    int param_count() const
    {
        switch (backend) {
        case Backend::Method1:
        case Backend::Method2:
        case Backend::Method3:
            return votes_per_codeword(backend_method(backend), K);
        default:
            return params > 0 ? params : votes_per_codeword(Method::IndexBased, K);
        }
    }
};

/// RMSE of the estimates against the true medians, index i after i rounds.
struct RmseTrajectory {
    std::vector<double> rmse;
    /// Delta-method standard error of the final RMSE over realizations.
    double final_std_error = 0.0;
    double final() const { return rmse.back(); }
};

namespace detail {

constexpr std::uint64_t median_param_tag = 0x6D656469616E0001ULL;
constexpr std::uint64_t median_round_tag = 0x6D656469616E0002ULL;

/// One round of over-the-air majority votes for every parameter.
class MvChannel {
public:
    explicit MvChannel(const MedianConfig& cfg)
        : cfg_(cfg), noise_var_(snr_db_to_noise_var(cfg.snr_db)), powers_(cfg.pdp.powers())
    {
        if (cfg.backend == Backend::Method1 || cfg.backend == Backend::Method2 || cfg.backend == Backend::Method3)
            link_.emplace(LinkConfig{backend_method(cfg.backend), cfg.K, cfg.pdp, noise_var_});
        seq_len_ = cfg.goldenbaum_len > 0 ? cfg.goldenbaum_len : goldenbaum_default_length(cfg.K);
    }

    MvDecision operator()(const VoteMatrix& votes, std::uint64_t key) const
    {
        const int users = votes.users();
        const int M = votes.votes();
        MvDecision mv(M);
        switch (cfg_.backend) {
        case Backend::Ideal:
            for (int l = 0; l < M; ++l)
                mv[l] = votes.majority(l);
            return mv;
        case Backend::Method1:
        case Backend::Method2:
        case Backend::Method3:
            return link_->decode(link_->receive(link_->encode(votes), cfg_.seed ^ median_round_tag, key));
        case Backend::Goldenbaum: {
            const GoldenbaumConfig gcfg{seq_len_, noise_var_, users};
            std::vector<ComplexVec> taps;
            std::vector<Rng> user_rng;
            for (int u = 0; u < users; ++u) {
                user_rng.push_back(stream(cfg_.seed ^ median_round_tag, key, static_cast<std::uint64_t>(u)));
                taps.push_back(sample_taps(std::span<const double>(powers_), user_rng.back()));
            }
            auto noise_rng = stream(cfg_.seed ^ median_round_tag, key, static_cast<std::uint64_t>(users));
            for (int l = 0; l < M; ++l) {
                ReceivedSequence y(seq_len_ + cfg_.pdp.taps - 1, cplx{0.0, 0.0});
                for (int u = 0; u < users; ++u)
                    convolve_add(goldenbaum_encode(votes(u, l), seq_len_, user_rng[u]), taps[u], y);
                add_noise(std::span<cplx>(y), noise_var_, noise_rng);
                mv[l] = goldenbaum_decode(y, gcfg);
            }
            return mv;
        }
        case Backend::Obda: {
            // Each vote rides its own single-tap subcarrier with independent fading.
            std::vector<Rng> user_rng;
            for (int u = 0; u < users; ++u)
                user_rng.push_back(stream(cfg_.seed ^ median_round_tag, key, static_cast<std::uint64_t>(u)));
            auto noise_rng = stream(cfg_.seed ^ median_round_tag, key, static_cast<std::uint64_t>(users));
            for (int l = 0; l < M; ++l) {
                cplx y{0.0, 0.0};
                for (int u = 0; u < users; ++u) {
                    const cplx h = complex_gaussian(user_rng[u], 1.0);
                    y += h * obda_encode(votes(u, l), h, cfg_.obda, user_rng[u]);
                }
                y += complex_gaussian(noise_rng, noise_var_);
                mv[l] = obda_decode(y);
            }
            return mv;
        }
        }
        throw invalid_parameter("unknown backend");
    }

private:
    MedianConfig cfg_;
    double noise_var_;
    std::vector<double> powers_;
    std::optional<LinkSimulator> link_;
    int seq_len_ = 1;
};

} // namespace detail

/// Full loop over independent realizations: local votes, over-the-air MV,
/// estimate update. Returns the RMSE trajectory over rounds.
inline RmseTrajectory run_median(const MedianConfig& cfg)
{
    detail::require(cfg.users >= 1 && cfg.rounds >= 1 && cfg.realizations >= 1, "run_median: bad configuration");
    if (cfg.backend == Backend::Obda)
        detail::require(cfg.pdp.taps == 1, "run_median: OBDA is defined for single-tap channels only");
    const int M = cfg.param_count();
    const detail::MvChannel channel(cfg);

    std::vector<std::vector<double>> sq(cfg.realizations);
    parallel_for(cfg.realizations, cfg.threads, [&](std::int64_t r) {
        auto prng = stream(cfg.seed ^ detail::median_param_tag, static_cast<std::uint64_t>(r));
        const auto params = sample_device_params(cfg.users, M, prng);
        std::vector<double> truth(M);
        for (int l = 0; l < M; ++l)
            truth[l] = params.median(l);

        auto state = make_median_state(M, cfg.rounds, cfg.mu_start, cfg.mu_end);
        auto& err = sq[r];
        err.assign(cfg.rounds + 1, 0.0);
        auto record = [&](int i) {
            for (int l = 0; l < M; ++l)
                err[i] += (state.estimates[l] - truth[l]) * (state.estimates[l] - truth[l]);
        };
        record(0);
        VoteMatrix votes(cfg.users, M);
        for (int i = 0; i < cfg.rounds; ++i) {
            for (int l = 0; l < M; ++l) {
                const auto col = local_votes(state, params, l);
                for (int u = 0; u < cfg.users; ++u)
                    votes.set(u, l, col[u]);
            }
            const auto key = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(cfg.rounds) +
                             static_cast<std::uint64_t>(i);
            state = median_step(std::move(state), channel(votes, key));
            record(i + 1);
        }
    });

    RmseTrajectory out{std::vector<double>(cfg.rounds + 1, 0.0)};
    for (const auto& e : sq)
        for (int i = 0; i <= cfg.rounds; ++i)
            out.rmse[i] += e[i];
    for (auto& v : out.rmse)
        v = std::sqrt(v / (static_cast<double>(cfg.realizations) * M));
    if (cfg.realizations > 1 && out.final() > 0.0) {
        const double n = cfg.realizations;
        const double mean = out.final() * out.final();
        double var = 0.0;
        for (const auto& e : sq)
            var += (e.back() / M - mean) * (e.back() / M - mean);
        var /= n - 1.0;
        out.final_std_error = std::sqrt(var / n) / (2.0 * out.final());
    }
    return out;
}

} // namespace mocz
