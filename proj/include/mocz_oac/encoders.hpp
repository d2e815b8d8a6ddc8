#pragma once

// Vote-to-zero mappings for the uncoded, differential and index-based
// majority-vote methods.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "huffman.hpp"

namespace mocz {

enum class Method : std::uint8_t { Uncoded, Differential, IndexBased };

inline std::string_view method_name(Method m)
{
    switch (m) {
    case Method::Uncoded:
        return "method1";
    case Method::Differential:
        return "method2";
    case Method::IndexBased:
        return "method3";
    }
    return "?";
}

inline bool is_power_of_two(int K) { return K >= 1 && std::has_single_bit(static_cast<unsigned>(K)); }

/// Number of majority votes carried by one codeword of K zeros.
inline int votes_per_codeword(Method m, int K)
{
    switch (m) {
    case Method::Uncoded:
        detail::require(K >= 1, "Method 1 needs K >= 1");
        return K;
    case Method::Differential:
        detail::require(K >= 2 && K % 2 == 0, "Method 2 needs an even K, got " + std::to_string(K));
        return K / 2;
    case Method::IndexBased:
        detail::require(K >= 2 && is_power_of_two(K), "Method 3 needs K a power of two >= 2, got " + std::to_string(K));
        return std::countr_zero(static_cast<unsigned>(K));
    }
    return 0;
}

/// U x M matrix of +-1 votes, row-major, one row per transmitter.
class VoteMatrix {
public:
    VoteMatrix() = default;
    VoteMatrix(int users, int votes, int fill = -1)
        : users_(users), votes_(votes), v_(static_cast<std::size_t>(users) * votes, fill)
    {
        detail::require(users >= 1 && votes >= 1, "VoteMatrix: dimensions must be positive");
        detail::require(fill == 1 || fill == -1, "VoteMatrix: votes must be +-1");
    }

    int users() const noexcept { return users_; }
    int votes() const noexcept { return votes_; }

    int operator()(int u, int l) const { return v_[index(u, l)]; }

    void set(int u, int l, int value)
    {
        detail::require(value == 1 || value == -1, "VoteMatrix: votes must be +-1");
        v_[index(u, l)] = static_cast<int>(value);
    }

    std::span<const int> row(int u) const
    {
        return {v_.data() + static_cast<std::size_t>(u) * votes_, static_cast<std::size_t>(votes_)};
    }

    /// Number of +1 votes in column l.
    int positives(int l) const
    {
        int n = 0;
        for (int u = 0; u < users_; ++u)
            n += (*this)(u, l) > 0;
        return n;
    }

    /// sign(sum_u v_{u,l}); 0 on ties.
    int majority(int l) const
    {
        const int s = 2 * positives(l) - users_;
        return (s > 0) - (s < 0);
    }

private:
    std::size_t index(int u, int l) const
    {
        detail::require_shape(u >= 0 && u < users_ && l >= 0 && l < votes_, "VoteMatrix: index out of range");
        return static_cast<std::size_t>(u) * votes_ + l;
    }

    int users_ = 0;
    int votes_ = 0;
    std::vector<int> v_;
};

namespace detail {

inline void check_votes(std::span<const int> votes)
{
    for (auto v : votes)
        require(v == 1 || v == -1, "votes must be +-1");
}

} // namespace detail

/// b = (v + 1) / 2 for each vote.
inline std::vector<std::uint8_t> votes_to_bits(std::span<const int> votes)
{
    detail::check_votes(votes);
    std::vector<std::uint8_t> bits(votes.size());
    for (std::size_t i = 0; i < votes.size(); ++i)
        bits[i] = static_cast<std::uint8_t>((votes[i] + 1) / 2);
    return bits;
}

/// Vote l has significance 2^l.
inline int vote_index(std::span<const int> votes)
{
    int idx = 0;
    const auto bits = votes_to_bits(votes);
    for (std::size_t l = 0; l < bits.size(); ++l)
        idx |= bits[l] << l;
    return idx;
}

/// Method 1: vote +1 at slot k selects the inner zero, -1 the outer zero.
inline ZeroCodeword encode_m1(std::span<const int> votes, RadiusParam rp)
{
    detail::check_votes(votes);
    detail::require(static_cast<int>(votes.size()) == rp.K, "encode_m1: need K votes");
    std::vector<Radius> radii(rp.K);
    for (int k = 0; k < rp.K; ++k)
        radii[k] = votes[k] > 0 ? Radius::inner : Radius::outer;
    return {rp, std::move(radii)};
}

/// Method 2: vote l drives the slot pair (2l, 2l+1) as (inner, outer) for
/// +1 and (outer, inner) for -1.
inline ZeroCodeword encode_m2(std::span<const int> votes, RadiusParam rp)
{
    detail::check_votes(votes);
    const int M = votes_per_codeword(Method::Differential, rp.K);
    detail::require(static_cast<int>(votes.size()) == M, "encode_m2: need K/2 votes");
    std::vector<Radius> radii(rp.K);
    for (int l = 0; l < M; ++l) {
        const bool plus = votes[l] > 0;
        radii[2 * l] = plus ? Radius::inner : Radius::outer;
        radii[2 * l + 1] = plus ? Radius::outer : Radius::inner;
    }
    return {rp, std::move(radii)};
}

/// Method 3: the slot whose index has the vote bits as binary digits gets the
/// single inner zero.
inline ZeroCodeword encode_m3(std::span<const int> votes, RadiusParam rp)
{
    const int M = votes_per_codeword(Method::IndexBased, rp.K);
    detail::require(static_cast<int>(votes.size()) == M, "encode_m3: need log2(K) votes");
    std::vector<Radius> radii(rp.K, Radius::outer);
    radii[vote_index(votes)] = Radius::inner;
    return {rp, std::move(radii)};
}

inline ZeroCodeword encode(Method m, std::span<const int> votes, RadiusParam rp)
{
    switch (m) {
    case Method::Uncoded:
        return encode_m1(votes, rp);
    case Method::Differential:
        return encode_m2(votes, rp);
    case Method::IndexBased:
        return encode_m3(votes, rp);
    }
    throw invalid_parameter("encode: unknown method");
}

/// Encodes and converts every row of a vote matrix.
inline std::vector<CoefficientSequence> encode_users(Method m, const VoteMatrix& votes, RadiusParam rp,
                                                     const ZeroToCoeffConverter& conv)
{
    std::vector<CoefficientSequence> out;
    out.reserve(votes.users());
    for (int u = 0; u < votes.users(); ++u)
        out.push_back(conv(encode(m, votes.row(u), rp)));
    return out;
}

inline std::vector<CoefficientSequence> encode_users(Method m, const VoteMatrix& votes, RadiusParam rp)
{
    return encode_users(m, votes, rp, ZeroToCoeffConverter(rp.K));
}

} // namespace mocz
