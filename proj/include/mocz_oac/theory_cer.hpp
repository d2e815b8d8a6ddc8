#pragma once

// Computation-error-rate prediction. For fixed votes, every DiZeT test
// statistic is a scaled exponential, so P(U+ - U- < 0) is the CDF of a
// difference of two sums of independent exponentials, obtained by
// Gil-Pelaez inversion of the characteristic function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "channel.hpp"
#include "dizet.hpp"
#include "encoders.hpp"
#include "errors.hpp"
#include "huffman.hpp"
#include "link.hpp"

namespace mocz {

/// Two sums A = sum_i X_i, B = sum_j Y_j of independent exponentials,
/// described by their means (inverse rates). A zero mean marks a variable
/// that is identically zero.
struct ExpRateSet {
    std::vector<double> a_means;
    std::vector<double> b_means;
};

namespace detail {

inline std::vector<double> positive_means(const std::vector<double>& means)
{
    std::vector<double> out;
    for (double m : means) {
        require(std::isfinite(m) && m >= 0.0, "ExpRateSet: means must be finite and nonnegative");
        if (m > 0.0)
            out.push_back(m);
    }
    return out;
}

/// Bisecting 31-point Gauss-Kronrod with an absolute error budget per unit
/// length; a purely relative test never terminates on integrands that vanish.
template <class F>
double adaptive_gk(const F& f, double lo, double hi, double tol_density, int depth, double& residual)
{
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double est = gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 0.0, &err);
    const double tol = std::max(tol_density * (hi - lo), 1e-13 * std::abs(est));
    if (err <= tol || depth >= 40) {
        residual += err;
        return est;
    }
    const double mid = 0.5 * (lo + hi);
    return adaptive_gk(f, lo, mid, tol_density, depth + 1, residual) +
           adaptive_gk(f, mid, hi, tol_density, depth + 1, residual);
}

} // namespace detail

/// F_{A-B}(x) = 1/2 - (1/pi) int_0^inf Im[e^{-jtx} phi_A(t) conj(phi_B(t))] / t dt.
inline double cdf_diff_exp_sums(const ExpRateSet& rates, double x)
{
    auto a = detail::positive_means(rates.a_means);
    auto b = detail::positive_means(rates.b_means);

    if (a.empty() && b.empty())
        return x >= 0.0 ? 1.0 : 0.0;

    // The CDF is invariant to a common scaling of A, B and x.
    double scale = 0.0;
    for (double m : a)
        scale = std::max(scale, m);
    for (double m : b)
        scale = std::max(scale, m);
    for (auto& m : a)
        m /= scale;
    for (auto& m : b)
        m /= scale;
    x /= scale;

    if (a.size() + b.size() == 1) {
        if (!a.empty())
            return x < 0.0 ? 0.0 : -std::expm1(-x / a[0]);
        return x >= 0.0 ? 1.0 : std::exp(x / b[0]);
    }

    auto phi = [&](double t) {
        cplx v{1.0, 0.0};
        for (double m : a)
            v /= cplx{1.0, -t * m};
        for (double m : b)
            v /= cplx{1.0, t * m};
        return v;
    };
    auto integrand = [&](double t) { return (std::polar(1.0, -t * x) * phi(t)).imag() / t; };

    // Tail bound: |phi(t)| <= 1 / (t^2 m1 m2) with m1, m2 the two largest means.
    std::vector<double> all(a);
    all.insert(all.end(), b.begin(), b.end());
    std::partial_sort(all.begin(), all.begin() + 2, all.end(), std::greater<>());
    constexpr double tail_tol = 1e-9;
    const double t_tail = std::sqrt(1.0 / (2.0 * std::numbers::pi * tail_tol * all[0] * all[1]));
    double t_phi = 1.0;
    while (std::abs(phi(t_phi)) >= 1e-12 && t_phi < t_tail)
        t_phi *= 2.0;
    const double t_max = std::min(t_tail, t_phi);

    double integral = 0.0;
    double residual = 0.0;
    double lo = 0.0;
    double hi = std::min(1.0, t_max);
    while (lo < t_max) {
        integral += detail::adaptive_gk(integrand, lo, hi, 1e-9 / t_max, 0, residual);
        lo = hi;
        hi = std::min(hi * 4.0, t_max);
    }
    residual /= std::numbers::pi;
    if (!(residual < 1e-6) || !std::isfinite(integral))
        throw integration_failure("cdf_diff_exp_sums: quadrature did not converge", residual);
    return std::clamp(0.5 - integral / std::numbers::pi, 0.0, 1.0);
}

/// Scenario knowledge needed for the theoretical CER of any method.
struct TheoryContext {
    Method method = Method::IndexBased;
    RadiusParam rp{};
    PdpConfig pdp{};
    double noise_var = 0.0;

    static TheoryContext from(const LinkConfig& cfg) { return {cfg.method, cfg.rp(), cfg.pdp, cfg.noise_var}; }
};

namespace detail {

inline double signal_power(std::span<const CoefficientSequence> coeffs, cplx z)
{
    double s = 0.0;
    for (const auto& c : coeffs)
        s += std::norm(poly_eval(c, z));
    return s;
}

} // namespace detail

/// Method 1 exponential means and the CDF evaluation point.
inline std::pair<ExpRateSet, double> rates_m1(std::span<const CoefficientSequence> coeffs, int ell,
                                              const TheoryContext& ctx)
{
    detail::require(ctx.method == Method::Uncoded, "rates_m1: Method 1 context required");
    const int K = ctx.rp.K;
    detail::require(ell >= 0 && ell < K, "rates_m1: vote index out of range");
    const double d = ctx.rp.d;
    const double inv = 1.0 / d;
    const double gp = g1(ctx.rp, d), gm = g1(ctx.rp, inv);
    const double cp = f_channel(d, ctx.pdp), cm = f_channel(inv, ctx.pdp);
    const double np = f_noise(d, ctx.noise_var, K, ctx.pdp.taps);
    const double nm = f_noise(inv, ctx.noise_var, K, ctx.pdp.taps);
    const cplx w = unit_root(ell, K);
    const double mean_p = detail::signal_power(coeffs, d * w) / gp + np / (gp * cp);
    const double mean_m = detail::signal_power(coeffs, inv * w) / gm + nm / (gm * cm);
    return {ExpRateSet{{mean_p}, {mean_m}}, np / (gp * cp) - nm / (gm * cm)};
}

/// Methods 2 and 3: one exponential per radius-d test point, split by
/// which count estimate the point feeds. Evaluated at x = 0.
inline ExpRateSet rates_m23(std::span<const CoefficientSequence> coeffs, int ell, const TheoryContext& ctx)
{
    const int K = ctx.rp.K;
    const double d = ctx.rp.d;
    const double ch = f_channel(d, ctx.pdp);
    const double noise = f_noise(d, ctx.noise_var, K, ctx.pdp.taps);
    auto mean_at = [&](int slot) { return ch * detail::signal_power(coeffs, d * unit_root(slot, K)) + noise; };

    ExpRateSet r;
    if (ctx.method == Method::Differential) {
        detail::require(ell >= 0 && ell < votes_per_codeword(Method::Differential, K), "rates_m23: bad vote index");
        r.a_means.push_back(mean_at(2 * ell));
        r.b_means.push_back(mean_at(2 * ell + 1));
        return r;
    }
    detail::require(ctx.method == Method::IndexBased, "rates_m23: Method 2 or 3 context required");
    detail::require(ell >= 0 && ell < votes_per_codeword(Method::IndexBased, K), "rates_m23: bad vote index");
    for (int l = 0; l < K; ++l)
        ((l >> ell) & 1 ? r.a_means : r.b_means).push_back(mean_at(l));
    return r;
}

/// CER from P(U+ - U- < 0); an exact tie in the true counts is always an error.
inline double cer(int n_plus, int n_minus, double prob_negative)
{
    if (n_plus > n_minus)
        return prob_negative;
    if (n_plus < n_minus)
        return 1.0 - prob_negative;
    return 1.0;
}

/// P(U+ - U- < 0) for fixed user coefficient sequences.
inline double prob_negative(std::span<const CoefficientSequence> coeffs, int ell, const TheoryContext& ctx)
{
    if (ctx.method == Method::Uncoded) {
        auto [rates, x] = rates_m1(coeffs, ell, ctx);
        return cdf_diff_exp_sums(rates, x);
    }
    return cdf_diff_exp_sums(rates_m23(coeffs, ell, ctx), 0.0);
}

inline double conditional_cer(const VoteMatrix& votes, int ell, const TheoryContext& ctx,
                              const ZeroToCoeffConverter& conv)
{
    const int n_plus = votes.positives(ell);
    const int n_minus = votes.users() - n_plus;
    if (n_plus == n_minus)
        return 1.0;
    const auto coeffs = encode_users(ctx.method, votes, ctx.rp, conv);
    return cer(n_plus, n_minus, prob_negative(coeffs, ell, ctx));
}

inline double conditional_cer(const VoteMatrix& votes, int ell, const TheoryContext& ctx)
{
    return conditional_cer(votes, ell, ctx, ZeroToCoeffConverter(ctx.rp.K));
}

struct CerEstimate {
    double probability = 0.0;
    double std_error = 0.0;
    int realizations = 0;
    Method method = Method::IndexBased;
    int K = 0;
    int users = 0;
    int n_plus = 0;
    int n_minus = 0;
};

/// Theoretical CER averaged over random realizations of the votes other than
/// column `ell`, which holds n_plus ones followed by n_minus minus-ones.
template <class Urbg>
CerEstimate vote_averaged_cer(int n_plus, int n_minus, const TheoryContext& ctx, int n_realizations, Urbg& rng,
                              int ell = 0)
{
    detail::require(n_realizations >= 1, "vote_averaged_cer: need at least one realization");
    detail::require(n_plus >= 0 && n_minus >= 0 && n_plus + n_minus >= 1, "vote_averaged_cer: bad vote counts");
    const int users = n_plus + n_minus;
    const int M = votes_per_codeword(ctx.method, ctx.rp.K);
    CerEstimate est{0.0, 0.0, n_realizations, ctx.method, ctx.rp.K, users, n_plus, n_minus};
    if (n_plus == n_minus) {
        est.probability = 1.0;
        return est;
    }
    const ZeroToCoeffConverter conv(ctx.rp.K);
    if (M == 1) {
        est.probability = conditional_cer(sample_votes(users, M, ell, n_plus, rng), ell, ctx, conv);
        est.realizations = 1;
        return est;
    }
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < n_realizations; ++r) {
        const double c = conditional_cer(sample_votes(users, M, ell, n_plus, rng), ell, ctx, conv);
        sum += c;
        sum2 += c * c;
    }
    const double n = n_realizations;
    est.probability = sum / n;
    if (n_realizations > 1) {
        const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

} // namespace mocz
