#pragma once

// Huffman polynomials: synthesis from zeros, coefficient conversion,
// Horner evaluation and aperiodic autocorrelation.
//
// Coefficient vectors are stored in ascending powers: c[0] is the constant
// term and c[K] the leading coefficient.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mocz {

using cplx = std::complex<double>;
using ComplexVec = std::vector<cplx>;

/// Coefficients c_0..c_K of a polynomial, ascending powers.
using CoefficientSequence = ComplexVec;

/// Unit root e^{j 2 pi num / den}, reduced modulo den for accuracy.
inline cplx unit_root(std::int64_t num, std::int64_t den)
{
    std::int64_t r = num % den;
    if (r < 0)
        r += den;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

/// Radius d of the two zero circles together with the zero count K.
struct RadiusParam {
    int K = 0;
    double d = 0.0;

    /// Normalization constant 1 / (d^K + d^-K).
    double eta() const { return 1.0 / (std::pow(d, K) + std::pow(d, -K)); }

    /// d = sqrt(1 + sin(pi / K)), which maximizes the minimum zero distance.
    static RadiusParam for_zeros(int K)
    {
        detail::require(K >= 2, "radius_param: K must be at least 2, got " + std::to_string(K));
        return {K, std::sqrt(1.0 + std::sin(std::numbers::pi / K))};
    }

    static RadiusParam custom(int K, double d)
    {
        detail::require(K >= 1, "RadiusParam: K must be positive");
        detail::require(d > 1.0 && std::isfinite(d), "RadiusParam: d must be finite and > 1");
        return {K, d};
    }
};

inline RadiusParam radius_param(int K) { return RadiusParam::for_zeros(K); }

enum class Radius : std::uint8_t { inner, outer };

/// One radius choice per angular slot. Slot k carries the zero
/// r_k e^{j 2 pi k / K} with r_k = 1/d (inner) or d (outer).
class ZeroCodeword {
public:
    ZeroCodeword(RadiusParam rp, std::vector<Radius> radii) : rp_(rp), radii_(std::move(radii))
    {
        detail::require(rp_.K >= 1 && rp_.d > 1.0, "ZeroCodeword: invalid radius parameter");
        detail::require(static_cast<int>(radii_.size()) == rp_.K,
                        "ZeroCodeword: expected " + std::to_string(rp_.K) + " radius selections, got " +
                            std::to_string(radii_.size()));
    }

    /// All zeros on the given circle.
    static ZeroCodeword uniform(RadiusParam rp, Radius r) { return {rp, std::vector<Radius>(rp.K, r)}; }

    int size() const noexcept { return rp_.K; }
    const RadiusParam& radius_param() const noexcept { return rp_; }
    const std::vector<Radius>& radii() const noexcept { return radii_; }
    Radius selection(int k) const { return radii_.at(k); }

    double radius(int k) const { return radii_.at(k) == Radius::inner ? 1.0 / rp_.d : rp_.d; }
    cplx zero(int k) const { return radius(k) * unit_root(k, rp_.K); }

    ComplexVec zeros() const
    {
        ComplexVec z(rp_.K);
        for (int k = 0; k < rp_.K; ++k)
            z[k] = zero(k);
        return z;
    }

    int inner_count() const noexcept
    {
        int n = 0;
        for (auto r : radii_)
            n += r == Radius::inner;
        return n;
    }

    friend bool operator==(const ZeroCodeword& a, const ZeroCodeword& b)
    {
        return a.rp_.K == b.rp_.K && a.rp_.d == b.rp_.d && a.radii_ == b.radii_;
    }

private:
    RadiusParam rp_;
    std::vector<Radius> radii_;
};

/// Leading coefficient c_K = sqrt(eta (K+1) / prod |alpha_k|), chosen real
/// positive. With this choice sum |c_n|^2 = K+1.
inline double leading_coeff(const ZeroCodeword& cw)
{
    const auto& rp = cw.radius_param();
    // prod |alpha_k| = d^(#outer - #inner)
    const int excess = rp.K - 2 * cw.inner_count();
    return std::sqrt(rp.eta() * (rp.K + 1) / std::pow(rp.d, excess));
}

/// Horner evaluation of sum_n c_n z^n.
inline cplx poly_eval(std::span<const cplx> coeffs, cplx z)
{
    cplx acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

/// Precomputed (K+1)-point transform tables for repeated conversions at a
/// fixed K. Immutable after construction.
class ZeroToCoeffConverter {
public:
    explicit ZeroToCoeffConverter(int K) : K_(K)
    {
        detail::require(K >= 1, "ZeroToCoeffConverter: K must be positive");
        const int n = K + 1;
        twiddle_.resize(static_cast<std::size_t>(n) * n);
        for (int p = 0; p < n; ++p)
            for (int m = 0; m < n; ++m)
                twiddle_[static_cast<std::size_t>(p) * n + m] = unit_root(static_cast<std::int64_t>(p) * m, n);
    }

    int K() const noexcept { return K_; }

    /// Evaluates the zero-form polynomial at the K+1 points e^{j 2 pi p/(K+1)}
    /// and applies the forward DFT with 1/(K+1) scaling.
    CoefficientSequence operator()(const ZeroCodeword& cw) const
    {
        detail::require(cw.size() == K_, "ZeroToCoeffConverter: codeword size mismatch");
        const int n = K_ + 1;
        const double lead = leading_coeff(cw);
        const ComplexVec zeros = cw.zeros();

        ComplexVec samples(n);
        for (int p = 0; p < n; ++p) {
            const cplx w = twiddle_[static_cast<std::size_t>(p) * n + 1];
            cplx v{lead, 0.0};
            for (const auto& a : zeros)
                v *= (w - a);
            samples[p] = v;
        }

        CoefficientSequence c(n);
        const double scale = 1.0 / n;
        for (int m = 0; m < n; ++m) {
            cplx acc{0.0, 0.0};
            for (int p = 0; p < n; ++p)
                acc += samples[p] * std::conj(twiddle_[static_cast<std::size_t>(p) * n + m]);
            c[m] = acc * scale;
        }
        return c;
    }

private:
    int K_;
    ComplexVec twiddle_; // twiddle_[p*(K+1)+m] = e^{j 2 pi p m / (K+1)}
};

/// Production conversion path: transform-based, O(K^2).
inline CoefficientSequence zeros_to_coeffs(const ZeroCodeword& cw)
{
    return ZeroToCoeffConverter(cw.size())(cw);
}

/// Expands prod (z - alpha_k) one zero at a time and scales by the leading
/// coefficient. Kept as a cross-check for the transform path.
inline CoefficientSequence zeros_to_coeffs_iterative(const ZeroCodeword& cw)
{
    const int K = cw.size();
    CoefficientSequence c(K + 1, cplx{0.0, 0.0});
    c[0] = 1.0;
    for (int k = 0; k < K; ++k) {
        const cplx a = cw.zero(k);
        // multiply current degree-k polynomial by (z - a)
        for (int n = k + 1; n >= 1; --n)
            c[n] = c[n - 1] - a * c[n];
        c[0] = -a * c[0];
    }
    const double lead = leading_coeff(cw);
    for (auto& v : c)
        v *= lead;
    return c;
}

/// Aperiodic autocorrelation a(-K)..a(K) of a length-(K+1) sequence.
struct AacfProfile {
    int K = 0;
    ComplexVec values; // values[lag + K]

    cplx at(int lag) const
    {
        if (lag < -K || lag > K)
            return {0.0, 0.0};
        return values[static_cast<std::size_t>(lag + K)];
    }
};

inline AacfProfile aacf(std::span<const cplx> x)
{
    detail::require(!x.empty(), "aacf: empty sequence");
    const int K = static_cast<int>(x.size()) - 1;
    AacfProfile out{K, ComplexVec(2 * K + 1)};
    for (int lag = 0; lag <= K; ++lag) {
        cplx acc{0.0, 0.0};
        for (int n = 0; n + lag <= K; ++n)
            acc += std::conj(x[n]) * x[n + lag];
        out.values[lag + K] = acc;
        out.values[K - lag] = std::conj(acc);
    }
    return out;
}

inline double energy(std::span<const cplx> x)
{
    double e = 0.0;
    for (const auto& v : x)
        e += std::norm(v);
    return e;
}

} // namespace mocz
