// Seven devices vote on every entry of a sign vector; the receiver
// computes all majority votes from one superposed transmission.

#include <cstdio>
#include <string>

#include <mocz_oac/link.hpp>
#include <mocz_oac/theory_cer.hpp>

int main()
{
    using namespace mocz;
    constexpr int users = 7;
    constexpr int K = 16;
    constexpr std::uint64_t seed = 2024;

    for (Method m : {Method::Uncoded, Method::Differential, Method::IndexBased}) {
        const LinkConfig cfg{m, K, PdpConfig{3, 0.8}, snr_db_to_noise_var(15.0)};
        const LinkSimulator sim(cfg);
        const int M = cfg.votes();

        auto vrng = stream(seed, 0, 99);
        VoteMatrix votes(users, M);
        for (int u = 0; u < users; ++u)
            for (int l = 0; l < M; ++l)
                votes.set(u, l, (vrng() >> 63) ? 1 : -1);

        const auto decided = sim.decode(sim.receive(sim.encode(votes), seed, 0));
        std::string truth, got;
        int errors = 0;
        for (int l = 0; l < M; ++l) {
            const int t = votes.majority(l);
            truth += t > 0 ? '+' : '-';
            got += decided[l] > 0 ? '+' : decided[l] < 0 ? '-' : '0';
            errors += decided[l] != t;
        }
        std::printf("%s, %d votes per codeword\n", std::string(method_name(m)).c_str(), M);
        std::printf("  true MV    %s\n", truth.c_str());
        std::printf("  decoded MV %s  (%d errors)\n", got.c_str(), errors);

        auto rng = stream(seed, 1);
        const auto est = vote_averaged_cer(5, 2, TheoryContext::from(cfg), 200, rng);
        std::printf("  predicted CER at N+=5, N-=2: %.4f +- %.4f\n\n", est.probability, est.std_error);
    }
    return 0;
}
