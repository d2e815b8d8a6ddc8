#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include <mocz_oac/huffman.hpp>

#include "test_support.hpp"

using namespace mocz;
using mocz::testing::codeword_from_mask;
using mocz::testing::random_codeword;

namespace {

RadiusParam d2_rp() { return RadiusParam::custom(2, 2.0); }

// {1/2, -2}: slot 0 inner, slot 1 outer
ZeroCodeword half_minus_two() { return {d2_rp(), {Radius::inner, Radius::outer}}; }
// {2, -1/2}
ZeroCodeword two_minus_half() { return {d2_rp(), {Radius::outer, Radius::inner}}; }

void expect_near(cplx a, cplx b, double tol)
{
    EXPECT_NEAR(a.real(), b.real(), tol);
    EXPECT_NEAR(a.imag(), b.imag(), tol);
}

} // namespace

TEST(RadiusParam, DefaultRule)
{
    const auto rp2 = radius_param(2);
    EXPECT_NEAR(rp2.d, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(rp2.eta(), 0.4, 1e-15);
    EXPECT_NEAR(radius_param(4).d, 1.3065629648763766, 1e-12);
}

TEST(RadiusParam, DecreasesTowardOne)
{
    double prev = radius_param(2).d;
    for (int K = 3; K <= 512; ++K) {
        const double d = radius_param(K).d;
        EXPECT_LT(d, prev);
        EXPECT_GT(d, 1.0);
        prev = d;
    }
}

TEST(RadiusParam, RejectsSmallK)
{
    EXPECT_THROW(radius_param(1), invalid_parameter);
    EXPECT_THROW(radius_param(0), invalid_parameter);
    EXPECT_THROW(RadiusParam::custom(3, 1.0), invalid_parameter);
}

TEST(ZeroCodeword, ZeroPhasesAndSize)
{
    const auto rp = radius_param(8);
    EXPECT_THROW(ZeroCodeword(rp, std::vector<Radius>(7, Radius::inner)), invalid_parameter);
    const auto cw = codeword_from_mask(rp, 0b10110010);
    for (int k = 0; k < 8; ++k) {
        EXPECT_NEAR(std::arg(cw.zero(k) * std::polar(1.0, -2.0 * M_PI * k / 8)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(cw.zero(k)), ((0b10110010 >> k) & 1) ? 1.0 / rp.d : rp.d, 1e-14);
    }
}

TEST(LeadingCoeff, TwoZerosAtRadiusTwo)
{
    EXPECT_NEAR(leading_coeff(half_minus_two()), std::sqrt(12.0 / 17.0), 1e-15);
}

TEST(LeadingCoeff, UniformCodewords)
{
    for (int K : {2, 5, 16}) {
        const auto rp = radius_param(K);
        const double eta = rp.eta();
        EXPECT_NEAR(leading_coeff(ZeroCodeword::uniform(rp, Radius::outer)),
                    std::sqrt(eta * (K + 1) / std::pow(rp.d, K)), 1e-14);
        EXPECT_NEAR(leading_coeff(ZeroCodeword::uniform(rp, Radius::inner)),
                    std::sqrt(eta * (K + 1) * std::pow(rp.d, K)), 1e-14);
    }
}

TEST(ZerosToCoeffs, TwoZerosBothCodewords)
{
    const double s = std::sqrt(12.0 / 17.0);
    const auto c1 = zeros_to_coeffs(half_minus_two());
    const auto c2 = zeros_to_coeffs(two_minus_half());
    ASSERT_EQ(c1.size(), 3u);
    expect_near(c1[0], -s, 1e-12);
    expect_near(c1[1], 1.5 * s, 1e-12);
    expect_near(c1[2], s, 1e-12);
    expect_near(c2[0], -s, 1e-12);
    expect_near(c2[1], -1.5 * s, 1e-12);
    expect_near(c2[2], s, 1e-12);
}

TEST(ZerosToCoeffsIterative, MonomialAndTwoZeros)
{
    const auto rp = RadiusParam::custom(1, 3.0);
    const ZeroCodeword cw(rp, {Radius::outer});
    const auto c = zeros_to_coeffs_iterative(cw);
    const double lead = leading_coeff(cw);
    expect_near(c[0], -3.0 * lead, 1e-14);
    expect_near(c[1], lead, 1e-14);

    const auto a = zeros_to_coeffs(half_minus_two());
    const auto b = zeros_to_coeffs_iterative(half_minus_two());
    for (int n = 0; n < 3; ++n)
        expect_near(a[n], b[n], 1e-14);
}

TEST(ZerosToCoeffs, AgreesWithIterativeExpansion)
{
    std::mt19937_64 gen(7);
    for (int K = 2; K <= 16; ++K) {
        const auto rp = radius_param(K);
        for (int trial = 0; trial < 100; ++trial) {
            const auto cw = random_codeword(rp, gen);
            const auto a = zeros_to_coeffs(cw);
            const auto b = zeros_to_coeffs_iterative(cw);
            for (int n = 0; n <= K; ++n)
                ASSERT_LT(std::abs(a[n] - b[n]), 1e-8) << "K=" << K;
        }
    }
}

TEST(PolyEval, HandValues)
{
    const ComplexVec c{1.0, 0.0, 1.0};
    EXPECT_LT(std::abs(poly_eval(c, cplx{0.0, 1.0})), 1e-15);
    const ComplexVec zero(5, cplx{0.0, 0.0});
    EXPECT_EQ(poly_eval(zero, cplx{3.0, -2.0}), cplx(0.0, 0.0));
    EXPECT_LT(std::abs(poly_eval(zeros_to_coeffs(half_minus_two()), 0.5)), 1e-12);
    // 2 - 3z + z^3 at z = 2 -> 2 - 6 + 8
    EXPECT_NEAR(poly_eval(ComplexVec{2.0, -3.0, 0.0, 1.0}, 2.0).real(), 4.0, 1e-15);
}

TEST(Aacf, TwoZeros)
{
    const auto a = aacf(zeros_to_coeffs(half_minus_two()));
    EXPECT_NEAR(a.at(0).real(), 3.0, 1e-12);
    EXPECT_LT(std::abs(a.at(1)), 1e-12);
    EXPECT_LT(std::abs(a.at(-1)), 1e-12);
    EXPECT_NEAR(std::abs(a.at(2)), 12.0 / 17.0, 1e-12);
    EXPECT_NEAR(std::abs(a.at(-2)), 12.0 / 17.0, 1e-12);
}

TEST(Aacf, ImpulseAndSymmetry)
{
    const auto a = aacf(ComplexVec{1.0, 0.0, 0.0, 0.0});
    EXPECT_EQ(a.at(0), cplx(1.0, 0.0));
    for (int lag = 1; lag <= 3; ++lag) {
        EXPECT_EQ(a.at(lag), cplx(0.0, 0.0));
        EXPECT_EQ(a.at(-lag), cplx(0.0, 0.0));
    }
    const ComplexVec x{{1.0, 2.0}, {-0.5, 0.25}, {0.0, -1.0}};
    const auto b = aacf(x);
    for (int lag = -2; lag <= 2; ++lag)
        EXPECT_EQ(b.at(-lag), std::conj(b.at(lag)));
    EXPECT_GT(b.at(0).real(), 0.0);
    EXPECT_THROW(aacf(ComplexVec{}), invalid_parameter);
}

// All 2^K codewords for small K, random ones above.
TEST(HuffmanProperty, NormAacfAndZeroFidelity)
{
    std::mt19937_64 gen(11);
    auto check = [](const ZeroCodeword& cw) {
        const int K = cw.size();
        const auto rp = cw.radius_param();
        const auto c = zeros_to_coeffs(cw);
        ASSERT_NEAR(energy(c), K + 1.0, 1e-9);
        const auto a = aacf(c);
        ASSERT_NEAR(a.at(0).real(), K + 1.0, 1e-9);
        for (int lag = 1; lag < K; ++lag)
            ASSERT_LT(std::abs(a.at(lag)), 1e-9) << "K=" << K << " lag=" << lag;
        ASSERT_NEAR(std::abs(a.at(K)), rp.eta() * (K + 1), 1e-9);
        if (K <= 32) {
            for (int k = 0; k < K; ++k)
                ASSERT_LT(std::abs(poly_eval(c, cw.zero(k))), 1e-8);
        }
    };
    for (int K = 2; K <= 8; ++K)
        for (std::uint64_t mask = 0; mask < (1ULL << K); ++mask)
            check(codeword_from_mask(radius_param(K), mask));
    for (int K : {12, 16, 32, 64})
        for (int i = 0; i < 1000; ++i)
            check(random_codeword(radius_param(K), gen));
}
