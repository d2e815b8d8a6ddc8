#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <mocz_oac/dizet.hpp>
#include <mocz_oac/link.hpp>

#include "moment_oracle.hpp"
#include "test_support.hpp"

using namespace mocz;
using mocz::testing::votes_from_mask;

namespace {

ReceivedSequence noiseless(const std::vector<CoefficientSequence>& x, const ChannelRealization& ch)
{
    return superpose_noiseless(std::span<const ComplexVec>(x), ch);
}

DecoderContext context(Method m, int K, PdpConfig pdp = {}, double noise_var = 0.0)
{
    return DecoderContext::make(m, radius_param(K), pdp, noise_var);
}

std::vector<int> supported_sizes(Method m)
{
    switch (m) {
    case Method::Uncoded:
        return {2, 3, 4, 5, 6, 7, 8};
    case Method::Differential:
        return {2, 4, 6, 8};
    case Method::IndexBased:
        return {2, 4, 8};
    }
    return {};
}

constexpr Method all_methods[] = {Method::Uncoded, Method::Differential, Method::IndexBased};

} // namespace

TEST(FChannel, Examples)
{
    for (double a : {0.3, 1.0, 2.5})
        EXPECT_DOUBLE_EQ(f_channel(a, PdpConfig{1, 0.4}), 1.0);
    EXPECT_NEAR(f_channel(std::sqrt(2.0), PdpConfig{5, 1.0}), 6.2, 1e-12);
    EXPECT_NEAR(f_channel(std::sqrt(2.0), PdpConfig{2, 0.5}), 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(f_channel(1.0, PdpConfig{4, 1.0}), 1.0, 1e-12);
}

TEST(FChannel, MatchesDirectSum)
{
    for (int L : {1, 2, 3, 8})
        for (double rho : {0.3, 0.9, 1.0})
            for (double a : {0.6, 1.0, 1.2, 1.0 / std::sqrt(0.9)}) {
                const auto p = pdp(L, rho);
                double s = 0.0;
                for (int l = 0; l < L; ++l)
                    s += p[l] * std::pow(a * a, l);
                EXPECT_NEAR(f_channel(a, PdpConfig{L, rho}), s, 1e-12 * s);
            }
}

TEST(FNoise, Examples)
{
    EXPECT_EQ(f_noise(1.7, 0.0, 8, 3), 0.0);
    EXPECT_NEAR(f_noise(std::sqrt(2.0), 1.0, 2, 1), 7.0, 1e-12);
    EXPECT_DOUBLE_EQ(f_noise(1.0, 1.0, 3, 2), 5.0);
    EXPECT_NEAR(f_noise(0.5, 2.0, 1, 1), 2.0 * (1 + 0.25), 1e-14);
}

TEST(G1, RadiusTwoValues)
{
    const auto rp = RadiusParam::custom(2, 2.0);
    EXPECT_NEAR(rp.eta(), 4.0 / 17.0, 1e-15);
    EXPECT_NEAR(g1(rp, 2.0), 32.5588, 1e-3);
    EXPECT_NEAR(g1(rp, 0.5), 2.0349, 1e-3);
    EXPECT_NEAR(g1(rp, 2.0) / g1(rp, 0.5), 16.0, 16.0 * 1e-12);
}

TEST(G1, RatioIsDToTheTwoK)
{
    for (int K = 2; K <= 64; ++K) {
        const auto rp = radius_param(K);
        const double ratio = g1(rp, rp.d) / g1(rp, 1.0 / rp.d);
        EXPECT_NEAR(ratio / std::pow(rp.d, 2 * K), 1.0, 1e-9) << "K=" << K;
    }
}

TEST(G2, EmptyProductAndPositivity)
{
    const auto rp = RadiusParam::custom(2, 2.0);
    const double d = 2.0;
    EXPECT_NEAR(g2(rp, d), rp.eta() * 3 * (d - 1 / d) * (d - 1 / d) * 4 * d * d, 1e-12);
    for (int K : {2, 4, 8, 16, 32}) {
        const auto r = radius_param(K);
        EXPECT_GT(g2(r, r.d), 0.0);
        EXPECT_GT(g2(r, 1.0 / r.d), 0.0);
    }
    EXPECT_THROW(g2(radius_param(5), 1.2), invalid_parameter);
}

TEST(G3, ClosedForm)
{
    EXPECT_NEAR(g3(RadiusParam::custom(2, 2.0), 2.0), 432.0 / 17.0, 1e-12);
    const double d = 1.3;
    for (int K : {2, 4, 8, 16}) {
        const auto rp = RadiusParam::custom(K, d);
        EXPECT_NEAR(g3(rp, d), rp.eta() * (K + 1) * std::pow(d - 1 / d, 2) * std::pow(d, K) * K * K, 1e-9);
    }
    EXPECT_THROW(g3(radius_param(6), 1.2), invalid_parameter);
}

TEST(G3, EqualsOwnIndexPower)
{
    for (int K : {2, 4, 8, 16}) {
        const auto rp = radius_param(K);
        const int M = votes_per_codeword(Method::IndexBased, K);
        for (std::uint64_t m = 0; m < (1ULL << M); ++m) {
            const auto c = zeros_to_coeffs(encode_m3(votes_from_mask(M, m), rp));
            const double p = std::norm(poly_eval(c, rp.d * unit_root(static_cast<int>(m), K)));
            EXPECT_NEAR(p / g3(rp, rp.d), 1.0, 1e-9);
        }
    }
}

TEST(TestPointMoments, SmallGrid)
{
    std::uint64_t seed = 100;
    for (Method m : all_methods)
        for (int K : {2, 4, 8})
            for (int taps : {1, 3}) {
                mocz::testing::MomentCase lc{m, K, taps, 0.5, 3, 2, votes_per_codeword(m, K) - 1};
                const auto [plus, minus] = mocz::testing::test_point_moments(lc, 20000, ++seed);
                EXPECT_LT(plus.z_score(), 4.0) << method_name(m) << " K=" << K << " taps=" << taps;
                EXPECT_LT(minus.z_score(), 4.0) << method_name(m) << " K=" << K << " taps=" << taps;
            }
}

TEST(G2, MonteCarloSingleUser)
{
    mocz::testing::MomentCase lc{Method::Differential, 4, 1, 1.0, 1, 1, 0};
    const auto [plus, minus] = mocz::testing::test_point_moments(lc, 100000, 7);
    EXPECT_NEAR(plus.mean / plus.expected, 1.0, 0.02);
    EXPECT_LT(minus.mean, 1e-20);
}

TEST(EstimateCountsM1, NoiselessZeros)
{
    const auto rp = radius_param(8);
    const auto ctx = DecoderContext::method1(rp, PdpConfig{1, 1.0}, 0.0);
    std::vector<int> v{1, -1, 1, 1, -1, -1, 1, -1};
    const std::vector<CoefficientSequence> x{zeros_to_coeffs(encode_m1(v, rp))};
    const auto est = estimate_counts_m1(noiseless(x, ChannelRealization::flat(1)), ctx);
    for (int l = 0; l < 8; ++l)
        EXPECT_NEAR(v[l] > 0 ? est.minus[l] : est.plus[l], 0.0, 1e-20);

    std::vector<CoefficientSequence> all_minus;
    for (int u = 0; u < 4; ++u)
        all_minus.push_back(zeros_to_coeffs(encode_m1(std::vector<int>(8, -1), rp)));
    const auto e2 = estimate_counts_m1(noiseless(all_minus, ChannelRealization::flat(4)), ctx);
    for (int l = 0; l < 8; ++l)
        EXPECT_NEAR(e2.plus[l], 0.0, 1e-20);
}

TEST(EstimateCountsM1, UnbiasedUnderNoise)
{
    const LinkConfig cfg{Method::Uncoded, 8, PdpConfig{3, 0.9}, snr_db_to_noise_var(10.0)};
    const LinkSimulator sim(cfg);
    const auto ctx = cfg.decoder();
    const int trials = 100000;
    auto vote_rng = stream(21, 0);
    double s = 0.0, s2 = 0.0, t = 0.0, t2 = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto votes = sample_votes(10, 8, 0, 7, vote_rng);
        const auto est = estimate_counts_m1(sim.receive(sim.encode(votes), 22, i), ctx);
        s += est.plus[0];
        s2 += est.plus[0] * est.plus[0];
        t += est.minus[0];
        t2 += est.minus[0] * est.minus[0];
    }
    const double mp = s / trials, mm = t / trials;
    EXPECT_NEAR(mp, 7.0, 3.0 * std::sqrt((s2 / trials - mp * mp) / trials));
    EXPECT_NEAR(mm, 3.0, 3.0 * std::sqrt((t2 / trials - mm * mm) / trials));
}

TEST(EstimateCountsM23, UnbiasedUnderNoise)
{
    for (Method m : {Method::Differential, Method::IndexBased}) {
        const LinkConfig cfg{m, 8, PdpConfig{3, 0.9}, snr_db_to_noise_var(10.0)};
        const LinkSimulator sim(cfg);
        const auto rp = cfg.rp();
        const int trials = 40000;
        auto vote_rng = stream(23, 0);
        double s = 0.0, s2 = 0.0, t = 0.0, t2 = 0.0;
        for (int i = 0; i < trials; ++i) {
            const auto votes = sample_votes(10, cfg.votes(), 1, 7, vote_rng);
            const auto y = sim.receive(sim.encode(votes), 24, i);
            const auto est = m == Method::Differential ? estimate_counts_m2(y, rp, cfg.pdp, cfg.noise_var)
                                                       : estimate_counts_m3(y, rp, cfg.pdp, cfg.noise_var);
            s += est.plus[1];
            s2 += est.plus[1] * est.plus[1];
            t += est.minus[1];
            t2 += est.minus[1] * est.minus[1];
        }
        const double mp = s / trials, mm = t / trials;
        EXPECT_NEAR(mp, 7.0, 3.5 * std::sqrt((s2 / trials - mp * mp) / trials)) << method_name(m);
        EXPECT_NEAR(mm, 3.0, 3.5 * std::sqrt((t2 / trials - mm * mm) / trials)) << method_name(m);
    }
}

TEST(Decode, NoiselessSingleUserAllPatterns)
{
    for (Method m : all_methods)
        for (int K : supported_sizes(m)) {
            const auto rp = radius_param(K);
            const auto ctx = context(m, K);
            const int M = ctx.votes();
            for (std::uint64_t mask = 0; mask < (1ULL << M); ++mask) {
                const auto v = votes_from_mask(M, mask);
                const std::vector<CoefficientSequence> x{zeros_to_coeffs(encode(m, v, rp))};
                EXPECT_EQ(decode(noiseless(x, ChannelRealization::flat(1)), ctx), v)
                    << method_name(m) << " K=" << K << " mask=" << mask;
            }
        }
}

TEST(DecodeM1, ThreeUsers)
{
    const auto rp = radius_param(4);
    const VoteMatrix votes = [] {
        VoteMatrix v(3, 4);
        v.set(0, 0, 1);
        v.set(1, 0, 1);
        v.set(0, 2, 1);
        v.set(1, 3, 1);
        v.set(2, 3, 1);
        return v;
    }();
    std::vector<CoefficientSequence> x;
    for (int u = 0; u < 3; ++u)
        x.push_back(mocz::testing::expand_zeros(encode_m1(votes.row(u), rp)));
    const auto y = noiseless(x, ChannelRealization::flat(3));
    const auto dec = decode_m1(y, context(Method::Uncoded, 4));
    EXPECT_EQ(dec[0], 1);
    EXPECT_EQ(dec[1], -1);
    EXPECT_EQ(dec[2], -1);
    EXPECT_EQ(dec[3], 1);
}

TEST(DecodeM3, TwoUsersDisagreeingIndices)
{
    const auto rp = radius_param(8);
    const std::vector<CoefficientSequence> x{zeros_to_coeffs(encode_m3(votes_from_mask(3, 3), rp)),
                                             zeros_to_coeffs(encode_m3(votes_from_mask(3, 5), rp))};
    const auto y = noiseless(x, ChannelRealization::flat(2));
    const auto dec = decode_m3(y, context(Method::IndexBased, 8));
    EXPECT_EQ(dec[0], 1);
    const double p3 = detail::power_at(y, rp.d, 3, 8), p5 = detail::power_at(y, rp.d, 5, 8);
    EXPECT_NEAR(p3 / p5, 1.0, 1e-9);
    for (int bit = 1; bit < 3; ++bit)
        EXPECT_TRUE(is_computation_error(dec[bit], 1, 2));
}

TEST(DecodeM3, KTwoIsM2WithOppositePolarity)
{
    const auto rp = radius_param(2);
    const auto c2 = context(Method::Differential, 2);
    const auto c3 = context(Method::IndexBased, 2);
    auto rng = stream(31, 0);
    for (int i = 0; i < 1000; ++i) {
        ReceivedSequence y(4);
        for (auto& v : y)
            v = complex_gaussian(rng, 1.0);
        const auto a = decode_m2(y, c2), b = decode_m3(y, c3);
        EXPECT_EQ(a[0], -b[0]);
    }
    for (int v : {1, -1}) {
        const std::vector<CoefficientSequence> x2{zeros_to_coeffs(encode_m2(std::vector<int>{v}, rp))};
        const std::vector<CoefficientSequence> x3{zeros_to_coeffs(encode_m3(std::vector<int>{v}, rp))};
        EXPECT_EQ(decode_m2(noiseless(x2, ChannelRealization::flat(1)), c2)[0], v);
        EXPECT_EQ(decode_m3(noiseless(x3, ChannelRealization::flat(1)), c3)[0], v);
    }
}

TEST(Decode, CommonPhaseInvariance)
{
    std::mt19937_64 gen(41);
    auto rng = stream(42, 0);
    std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
    for (Method m : all_methods) {
        const LinkConfig cfg{m, 8, PdpConfig{3, 0.8}, 0.1};
        const LinkSimulator sim(cfg);
        for (int i = 0; i < 200; ++i) {
            const int users = 1 + i % 5;
            VoteMatrix votes(users, cfg.votes());
            for (int u = 0; u < users; ++u)
                for (int l = 0; l < cfg.votes(); ++l)
                    votes.set(u, l, gen() & 1 ? 1 : -1);
            const auto x = sim.encode(votes);
            const auto ch = sample_channel(cfg.pdp, users, rng);
            auto rotated = ch;
            const cplx common = std::polar(1.0, phase(gen));
            for (int u = 0; u < users; ++u) {
                const cplx f = users == 1 ? std::polar(1.0, phase(gen)) : common;
                for (auto& h : rotated.user(u))
                    h *= f;
            }
            ReceivedSequence w(8 + 3, 0.0);
            add_noise(w, 0.1, rng);
            auto y1 = noiseless(x, ch), y2 = noiseless(x, rotated);
            const cplx c = users == 1 ? rotated.user(0)[0] / ch.user(0)[0] : common;
            for (std::size_t n = 0; n < w.size(); ++n) {
                y1[n] += w[n];
                y2[n] += c * w[n];
            }
            EXPECT_EQ(sim.decode(y1), sim.decode(y2));
        }
    }
}

TEST(Decode, CommonDelayInvariance)
{
    std::mt19937_64 gen(43);
    for (Method m : {Method::Differential, Method::IndexBased})
        for (int K : {4, 8}) {
            const auto rp = radius_param(K);
            const auto ctx = context(m, K);
            for (int delay = 0; delay < 3; ++delay) {
                for (int i = 0; i < 50; ++i) {
                    std::vector<CoefficientSequence> x;
                    for (int u = 0; u < 3; ++u)
                        x.push_back(zeros_to_coeffs(encode(m, mocz::testing::random_votes(ctx.votes(), gen), rp)));
                    ComplexVec taps(3, 0.0);
                    taps[delay] = 1.0;
                    ChannelRealization ch(3, 3);
                    for (int u = 0; u < 3; ++u)
                        std::copy(taps.begin(), taps.end(), ch.user(u).begin());
                    const auto y_flat = noiseless(x, ChannelRealization::flat(3));
                    const auto y_del = noiseless(x, ch);
                    EXPECT_EQ(decode(y_flat, ctx), decode(y_del, ctx));
                }
            }
        }
}

TEST(Decode, ContextErrors)
{
    const auto rp = radius_param(8);
    const ReceivedSequence y(9, 1.0);
    EXPECT_THROW(decode_m2(y, DecoderContext::method3(rp)), invalid_parameter);
    EXPECT_THROW(decode_m3(y, DecoderContext::method2(rp)), invalid_parameter);
    EXPECT_THROW(estimate_counts_m1(y, DecoderContext::method2(rp)), invalid_parameter);
    EXPECT_THROW(decode_m1(ReceivedSequence(5), DecoderContext::method1(rp, {}, 0.1)), shape_error);
    EXPECT_THROW(DecoderContext::method3(radius_param(6)), invalid_parameter);
    EXPECT_FALSE(DecoderContext::method2(rp).pdp.has_value());
    EXPECT_EQ(sign_of(0.0), 0);
    EXPECT_TRUE(is_computation_error(1, 2, 4));
    EXPECT_FALSE(is_computation_error(1, 3, 4));
    EXPECT_TRUE(is_computation_error(-1, 3, 4));
}
