#pragma once

// DiZeT detection of majority votes. The receiver evaluates the superposed
// polynomial at candidate zero locations and compares magnitude-squares.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "channel.hpp"
#include "encoders.hpp"
#include "errors.hpp"
#include "huffman.hpp"

namespace mocz {

/// sum_l p_l d_arg^{2l}, i.e. E|H(z)|^2 at |z| = d_arg.
inline double f_channel(double d_arg, const PdpConfig& cfg)
{
    detail::require(d_arg > 0.0, "f_channel: d_arg must be positive");
    const double a2 = d_arg * d_arg;
    const int L = cfg.taps;
    if (L == 1)
        return 1.0;
    const double q = cfg.rho < 1.0 ? a2 * cfg.rho : a2;
    if (std::abs(1.0 - q) < 1e-12) {
        const auto p = cfg.powers();
        double s = 0.0;
        for (int l = 0; l < L; ++l)
            s += p[l] * std::pow(a2, l);
        return s;
    }
    const double geo = (1.0 - std::pow(q, L)) / (1.0 - q);
    if (cfg.rho < 1.0)
        return (1.0 - cfg.rho) / (1.0 - std::pow(cfg.rho, L)) * geo;
    return geo / L;
}

/// E|W(z)|^2 at |z| = d_arg for K + L_e noise samples of variance noise_var.
inline double f_noise(double d_arg, double noise_var, int K, int taps)
{
    detail::require(d_arg > 0.0, "f_noise: d_arg must be positive");
    const int n = K + taps;
    const double a2 = d_arg * d_arg;
    if (std::abs(1.0 - a2) < 1e-12)
        return noise_var * n;
    return noise_var * (1.0 - std::pow(a2, n)) / (1.0 - a2);
}

/// Expected |P_u(d_arg e^{j theta_l})|^2 of a voter whose zero is absent from
/// the test point, Method 1 encoding with random other votes.
inline double g1(const RadiusParam& rp, double a)
{
    const int K = rp.K;
    const double base = rp.eta() * (K + 1) * (a - 1.0 / a) * (a - 1.0 / a) * std::pow(a, K);
    double prod = 1.0;
    for (int k = 1; k < K; ++k) {
        const cplx w = unit_root(k, K);
        prod *= 0.5 * (std::norm(1.0 - w) + std::norm(a - w / a));
    }
    return base * prod;
}

/// Method 2 counterpart of g1 (K even).
inline double g2(const RadiusParam& rp, double a)
{
    const int K = rp.K;
    detail::require(K >= 2 && K % 2 == 0, "g2: K must be even");
    const double base =
        rp.eta() * (K + 1) * (a - 1.0 / a) * (a - 1.0 / a) * std::norm(1.0 - unit_root(1, K)) * std::pow(a, K);
    double prod = 1.0;
    for (int k = 1; k < K / 2; ++k) {
        const cplx we = unit_root(2 * k, K);
        const cplx wo = unit_root(2 * k + 1, K);
        prod *= 0.5 * (std::norm(1.0 - we) * std::norm(a - wo / a) + std::norm(1.0 - wo) * std::norm(a - we / a));
    }
    return base * prod;
}

/// Method 3: |P_u|^2 at the test point of the user's own index (deterministic).
inline double g3(const RadiusParam& rp, double a)
{
    const int K = rp.K;
    detail::require(is_power_of_two(K), "g3: K must be a power of two");
    return rp.eta() * (K + 1) * (a - 1.0 / a) * (a - 1.0 / a) * std::pow(a, K) * double(K) * K;
}

/// Receiver-side knowledge. Only Method 1 uses the delay profile and noise
/// variance; Methods 2 and 3 carry neither.
struct DecoderContext {
    Method method = Method::Uncoded;
    RadiusParam rp{};
    std::optional<PdpConfig> pdp;
    std::optional<double> noise_var;

    static DecoderContext method1(RadiusParam rp, PdpConfig pdp, double noise_var)
    {
        detail::require(noise_var >= 0.0, "noise variance must be nonnegative");
        return {Method::Uncoded, rp, pdp, noise_var};
    }
    static DecoderContext method2(RadiusParam rp)
    {
        votes_per_codeword(Method::Differential, rp.K);
        return {Method::Differential, rp, std::nullopt, std::nullopt};
    }
    static DecoderContext method3(RadiusParam rp)
    {
        votes_per_codeword(Method::IndexBased, rp.K);
        return {Method::IndexBased, rp, std::nullopt, std::nullopt};
    }
    static DecoderContext make(Method m, RadiusParam rp, PdpConfig pdp, double noise_var)
    {
        switch (m) {
        case Method::Uncoded:
            return method1(rp, pdp, noise_var);
        case Method::Differential:
            return method2(rp);
        case Method::IndexBased:
            return method3(rp);
        }
        throw invalid_parameter("DecoderContext: unknown method");
    }

    int votes() const { return votes_per_codeword(method, rp.K); }
};

struct CountEstimates {
    std::vector<double> plus;
    std::vector<double> minus;
};

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

namespace detail {

inline double power_at(std::span<const cplx> y, double radius, int slot, int K)
{
    return std::norm(poly_eval(y, radius * unit_root(slot, K)));
}

inline void check_received(std::span<const cplx> y, int K)
{
    require_shape(static_cast<int>(y.size()) >= K + 1, "received sequence shorter than K+1");
}

} // namespace detail

/// Unbiased estimates of the +1 and -1 vote counts for Method 1.
inline CountEstimates estimate_counts_m1(std::span<const cplx> y, const DecoderContext& ctx)
{
    detail::require(ctx.method == Method::Uncoded && ctx.pdp && ctx.noise_var,
                    "estimate_counts_m1: needs a Method 1 context with PDP and noise variance");
    detail::check_received(y, ctx.rp.K);
    const int K = ctx.rp.K;
    const int taps = static_cast<int>(y.size()) - K;
    const double d = ctx.rp.d;
    const double inv = 1.0 / d;
    const double sig_p = g1(ctx.rp, d) * f_channel(d, *ctx.pdp);
    const double sig_m = g1(ctx.rp, inv) * f_channel(inv, *ctx.pdp);
    const double noise_p = f_noise(d, *ctx.noise_var, K, taps);
    const double noise_m = f_noise(inv, *ctx.noise_var, K, taps);
    CountEstimates est{std::vector<double>(K), std::vector<double>(K)};
    for (int l = 0; l < K; ++l) {
        est.plus[l] = (detail::power_at(y, d, l, K) - noise_p) / sig_p;
        est.minus[l] = (detail::power_at(y, inv, l, K) - noise_m) / sig_m;
    }
    return est;
}

/// Method 2 count estimates; the decoder itself never needs these scalars.
inline CountEstimates estimate_counts_m2(std::span<const cplx> y, const RadiusParam& rp, const PdpConfig& pdp,
                                         double noise_var)
{
    const int M = votes_per_codeword(Method::Differential, rp.K);
    detail::check_received(y, rp.K);
    const int taps = static_cast<int>(y.size()) - rp.K;
    const double scale = g2(rp, rp.d) * f_channel(rp.d, pdp);
    const double noise = f_noise(rp.d, noise_var, rp.K, taps);
    CountEstimates est{std::vector<double>(M), std::vector<double>(M)};
    for (int l = 0; l < M; ++l) {
        est.plus[l] = (detail::power_at(y, rp.d, 2 * l, rp.K) - noise) / scale;
        est.minus[l] = (detail::power_at(y, rp.d, 2 * l + 1, rp.K) - noise) / scale;
    }
    return est;
}

/// Method 3 count estimates. Each sum covers K/2 test points, each with
/// expectation N/2^{M-1} g3 f_channel, so the sum scales as N g3 f_channel.
inline CountEstimates estimate_counts_m3(std::span<const cplx> y, const RadiusParam& rp, const PdpConfig& pdp,
                                         double noise_var)
{
    const int M = votes_per_codeword(Method::IndexBased, rp.K);
    detail::check_received(y, rp.K);
    const int K = rp.K;
    const int taps = static_cast<int>(y.size()) - K;
    const double scale = g3(rp, rp.d) * f_channel(rp.d, pdp);
    const double noise = 0.5 * K * f_noise(rp.d, noise_var, K, taps);
    std::vector<double> power(K);
    for (int l = 0; l < K; ++l)
        power[l] = detail::power_at(y, rp.d, l, K);
    CountEstimates est{std::vector<double>(M, 0.0), std::vector<double>(M, 0.0)};
    for (int bit = 0; bit < M; ++bit) {
        double one = 0.0, zero = 0.0;
        for (int l = 0; l < K; ++l)
            ((l >> bit) & 1 ? one : zero) += power[l];
        est.plus[bit] = (one - noise) / scale;
        est.minus[bit] = (zero - noise) / scale;
    }
    return est;
}

/// Per-vote decisions in {-1, 0, +1}; 0 only on exact metric ties.
using MvDecision = std::vector<int>;

inline MvDecision decode_m1(std::span<const cplx> y, const DecoderContext& ctx)
{
    const auto est = estimate_counts_m1(y, ctx);
    MvDecision out(est.plus.size());
    for (std::size_t l = 0; l < out.size(); ++l)
        out[l] = sign_of(est.plus[l] - est.minus[l]);
    return out;
}

/// sign(|R(d w^{2l})|^2 - |R(d w^{2l+1})|^2): the even slot carries the +1
/// voters' energy.
inline MvDecision decode_m2(std::span<const cplx> y, const DecoderContext& ctx)
{
    detail::require(ctx.method == Method::Differential, "decode_m2: needs a Method 2 context");
    detail::check_received(y, ctx.rp.K);
    const int M = ctx.votes();
    MvDecision out(M);
    for (int l = 0; l < M; ++l)
        out[l] = sign_of(detail::power_at(y, ctx.rp.d, 2 * l, ctx.rp.K) -
                         detail::power_at(y, ctx.rp.d, 2 * l + 1, ctx.rp.K));
    return out;
}

inline MvDecision decode_m3(std::span<const cplx> y, const DecoderContext& ctx)
{
    detail::require(ctx.method == Method::IndexBased, "decode_m3: needs a Method 3 context");
    detail::check_received(y, ctx.rp.K);
    const int K = ctx.rp.K;
    const int M = ctx.votes();
    std::vector<double> power(K);
    for (int l = 0; l < K; ++l)
        power[l] = detail::power_at(y, ctx.rp.d, l, K);
    MvDecision out(M);
    for (int bit = 0; bit < M; ++bit) {
        double diff = 0.0;
        for (int l = 0; l < K; ++l)
            diff += (l >> bit) & 1 ? power[l] : -power[l];
        out[bit] = sign_of(diff);
    }
    return out;
}

inline MvDecision decode(std::span<const cplx> y, const DecoderContext& ctx)
{
    switch (ctx.method) {
    case Method::Uncoded:
        return decode_m1(y, ctx);
    case Method::Differential:
        return decode_m2(y, ctx);
    case Method::IndexBased:
        return decode_m3(y, ctx);
    }
    throw invalid_parameter("decode: unknown method");
}

} // namespace mocz
