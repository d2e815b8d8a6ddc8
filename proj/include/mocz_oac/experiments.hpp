#pragma once

// Experiment orchestration: flat key=value configuration, Monte Carlo and
// theory sweeps, and CSV emission. All parallel work is keyed by trial or
// point index so results do not depend on the worker count.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "baselines.hpp"
#include "channel.hpp"
#include "encoders.hpp"
#include "errors.hpp"
#include "link.hpp"
#include "median.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "theory_cer.hpp"
#include "waveform.hpp"

namespace mocz {

enum class Experiment : std::uint8_t { Cer, Snr, Pmepr, Rmse, Resources, Theory };

inline std::string_view experiment_name(Experiment e)
{
    switch (e) {
    case Experiment::Cer:
        return "cer";
    case Experiment::Snr:
        return "snr";
    case Experiment::Pmepr:
        return "pmepr";
    case Experiment::Rmse:
        return "rmse";
    case Experiment::Resources:
        return "resources";
    case Experiment::Theory:
        return "theory";
    }
    return "?";
}

inline Experiment parse_experiment(std::string_view s)
{
    for (auto e : {Experiment::Cer, Experiment::Snr, Experiment::Pmepr, Experiment::Rmse, Experiment::Resources,
                   Experiment::Theory})
        if (experiment_name(e) == s)
            return e;
    throw invalid_parameter("unknown experiment '" + std::string(s) + "'");
}

struct ExperimentConfig {
    Experiment experiment = Experiment::Cer;
    std::vector<std::string> methods{"method1", "method2", "method3"};
    int K = 8;
    int users = 25;
    int taps = 1;
    double rho = 1.0;
    std::vector<double> snr_db{10.0};
    /// Empty means every count 0..U.
    std::vector<int> n_plus;
    int ell = 0;
    std::int64_t trials = 10000;
    int realizations = 100;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out;

    std::string mapping = "dfts";
    int codewords = 10000;
    int oversampling = 16;

    int rounds = 500;
    double mu_start = 0.01;
    double mu_end = 1e-5;

    double efficiency = 1.0;
    int goldenbaum_len = 0;
    double obda_truncation = 0.2;
    bool obda_phase_errors = false;
    double obda_phase_deg = 120.0;
    bool obda_csi = true;

    std::vector<int> n_plus_values() const
    {
        if (!n_plus.empty())
            return n_plus;
        std::vector<int> all(users + 1);
        for (int i = 0; i <= users; ++i)
            all[i] = i;
        return all;
    }
    int goldenbaum_length() const { return goldenbaum_len > 0 ? goldenbaum_len : goldenbaum_default_length(K); }
    ObdaConfig obda() const { return {obda_truncation, obda_phase_deg, obda_phase_errors, obda_csi}; }
};

namespace detail {

inline std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(',', start);
        const auto item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (!item.empty())
            out.push_back(item);
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        if (s == "inf" || s == "+inf")
            return std::numeric_limits<T>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<T>::infinity();
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw invalid_parameter("config: bad value '" + s + "' for key '" + std::string(key) + "'");
    return value;
}

inline bool parse_bool(std::string_view key, std::string_view text)
{
    const auto s = trim(text);
    if (s == "1" || s == "true" || s == "yes" || s == "on")
        return true;
    if (s == "0" || s == "false" || s == "no" || s == "off")
        return false;
    throw invalid_parameter("config: bad boolean '" + s + "' for key '" + std::string(key) + "'");
}

/// "a:b" ranges and comma lists of integers.
inline std::vector<int> parse_int_list(std::string_view key, std::string_view text)
{
    std::vector<int> out;
    for (const auto& item : split_list(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(parse_number<int>(key, item));
            continue;
        }
        const int lo = parse_number<int>(key, std::string_view(item).substr(0, colon));
        const int hi = parse_number<int>(key, std::string_view(item).substr(colon + 1));
        require(lo <= hi, "config: empty range for key '" + std::string(key) + "'");
        for (int v = lo; v <= hi; ++v)
            out.push_back(v);
    }
    return out;
}

inline std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace detail

/// Applies one key=value setting. Unknown keys are rejected.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key_in, std::string_view value)
{
    using detail::parse_number;
    const std::string key = detail::trim(key_in);
    if (key == "experiment")
        cfg.experiment = parse_experiment(detail::trim(value));
    else if (key == "methods" || key == "method")
        cfg.methods = detail::split_list(value);
    else if (key == "K")
        cfg.K = parse_number<int>(key, value);
    else if (key == "U" || key == "users")
        cfg.users = parse_number<int>(key, value);
    else if (key == "L_e" || key == "taps")
        cfg.taps = parse_number<int>(key, value);
    else if (key == "rho")
        cfg.rho = parse_number<double>(key, value);
    else if (key == "snr_db") {
        cfg.snr_db.clear();
        for (const auto& s : detail::split_list(value))
            cfg.snr_db.push_back(parse_number<double>(key, s));
    } else if (key == "n_plus")
        cfg.n_plus = detail::parse_int_list(key, value);
    else if (key == "ell")
        cfg.ell = parse_number<int>(key, value);
    else if (key == "trials")
        cfg.trials = parse_number<std::int64_t>(key, value);
    else if (key == "realizations")
        cfg.realizations = parse_number<int>(key, value);
    else if (key == "seed")
        cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads")
        cfg.threads = parse_number<int>(key, value);
    else if (key == "out")
        cfg.out = detail::trim(value);
    else if (key == "mapping")
        cfg.mapping = detail::trim(value);
    else if (key == "codewords")
        cfg.codewords = parse_number<int>(key, value);
    else if (key == "oversampling")
        cfg.oversampling = parse_number<int>(key, value);
    else if (key == "rounds")
        cfg.rounds = parse_number<int>(key, value);
    else if (key == "mu_start")
        cfg.mu_start = parse_number<double>(key, value);
    else if (key == "mu_end")
        cfg.mu_end = parse_number<double>(key, value);
    else if (key == "efficiency")
        cfg.efficiency = parse_number<double>(key, value);
    else if (key == "goldenbaum_len")
        cfg.goldenbaum_len = parse_number<int>(key, value);
    else if (key == "obda_truncation")
        cfg.obda_truncation = parse_number<double>(key, value);
    else if (key == "obda_phase_errors")
        cfg.obda_phase_errors = detail::parse_bool(key, value);
    else if (key == "obda_phase_deg")
        cfg.obda_phase_deg = parse_number<double>(key, value);
    else if (key == "obda_csi")
        cfg.obda_csi = detail::parse_bool(key, value);
    else
        throw invalid_parameter("config: unknown key '" + key + "'");
}

/// Flat key=value text; '#' starts a comment, blank lines are skipped.
inline void apply_config_text(ExperimentConfig& cfg, std::istream& in)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto text = detail::trim(line);
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter("config line " + std::to_string(lineno) + ": expected key=value");
        apply_setting(cfg, std::string_view(text).substr(0, eq), std::string_view(text).substr(eq + 1));
    }
}

inline ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    apply_config_text(cfg, in);
    return cfg;
}

inline bool is_proposed_method(std::string_view m) { return m == "method1" || m == "method2" || m == "method3"; }

inline Method proposed_method(std::string_view m)
{
    if (m == "method1")
        return Method::Uncoded;
    if (m == "method2")
        return Method::Differential;
    if (m == "method3")
        return Method::IndexBased;
    throw invalid_parameter("not a zero-modulation method: '" + std::string(m) + "'");
}

/// Rejects configurations that the selected experiment cannot run.
inline void validate(const ExperimentConfig& cfg)
{
    using detail::require;
    require(cfg.K >= 2, "K must be >= 2");
    require(cfg.users >= 1, "U must be >= 1");
    require(cfg.taps >= 1, "L_e must be >= 1");
    require(cfg.rho > 0.0 && cfg.rho <= 1.0, "rho must lie in (0, 1]");
    require(cfg.trials >= 1, "trials must be >= 1");
    require(cfg.realizations >= 1, "realizations must be >= 1");
    require(cfg.threads >= 1, "threads must be >= 1");
    require(!cfg.methods.empty(), "methods list is empty");
    const bool link = cfg.experiment == Experiment::Cer || cfg.experiment == Experiment::Snr ||
                      cfg.experiment == Experiment::Theory;
    if (link) {
        require(!cfg.snr_db.empty(), "snr_db list is empty");
        for (int n : cfg.n_plus_values())
            require(n >= 0 && n <= cfg.users, "n_plus outside 0..U");
        require(!cfg.n_plus_values().empty(), "n_plus list is empty");
    }
    for (const auto& m : cfg.methods) {
        if (is_proposed_method(m)) {
            const int M = votes_per_codeword(proposed_method(m), cfg.K);
            if (link)
                require(cfg.ell >= 0 && cfg.ell < M, "ell outside the vote range of " + m);
            continue;
        }
        if (m == "goldenbaum") {
            require(cfg.experiment != Experiment::Theory, "no theory for goldenbaum");
            require(cfg.experiment != Experiment::Resources, "no resource model for goldenbaum");
            continue;
        }
        if (m == "obda") {
            require(cfg.experiment != Experiment::Theory, "no theory for obda");
            require(cfg.experiment != Experiment::Resources, "no resource model for obda");
            require(cfg.taps == 1 || cfg.experiment == Experiment::Pmepr, "obda needs L_e = 1");
            continue;
        }
        if (m == "ideal") {
            require(cfg.experiment == Experiment::Rmse, "the ideal backend exists only for rmse");
            continue;
        }
        if (m == "separation") {
            require(cfg.experiment == Experiment::Resources, "separation exists only for resources");
            continue;
        }
        throw invalid_parameter("unknown method '" + m + "'");
    }
    if (cfg.experiment == Experiment::Pmepr) {
        require(cfg.mapping == "dfts" || cfg.mapping == "ofdm", "mapping must be dfts or ofdm");
        require(cfg.codewords >= 1 && cfg.oversampling >= 1, "codewords and oversampling must be positive");
    }
    if (cfg.experiment == Experiment::Rmse) {
        require(cfg.rounds >= 1, "rounds must be >= 1");
        require(cfg.snr_db.size() == 1, "rmse takes exactly one snr_db value");
    }
    if (cfg.experiment == Experiment::Resources)
        require(cfg.efficiency > 0.0, "efficiency must be positive");
}

/// One CSV row. Fields that do not apply to an experiment stay empty.
struct ResultRow {
    std::string experiment;
    std::string method;
    std::string K, U, L_e, rho, snr_db, n_plus;
    std::string metric;
    double value = 0.0;
    double std_error = 0.0;
};

inline constexpr std::string_view csv_header = "experiment,method,K,U,L_e,rho,snr_db,n_plus,metric,value,stderr";

/// Metadata comment echoing every setting that affects the results.
inline std::string config_comment(const ExperimentConfig& cfg)
{
    using detail::format_double;
    std::ostringstream os;
    auto join = [](const auto& v, auto fmt) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + fmt(v[i]);
        return s;
    };
    os << "# experiment=" << experiment_name(cfg.experiment)
       << " methods=" << join(cfg.methods, [](const std::string& s) { return s; }) << " K=" << cfg.K
       << " U=" << cfg.users << " L_e=" << cfg.taps << " rho=" << format_double(cfg.rho)
       << " snr_db=" << join(cfg.snr_db, [](double v) { return format_double(v); })
       << " n_plus=" << join(cfg.n_plus_values(), [](int v) { return std::to_string(v); }) << " ell=" << cfg.ell
       << " trials=" << cfg.trials << " realizations=" << cfg.realizations << " mapping=" << cfg.mapping
       << " codewords=" << cfg.codewords << " oversampling=" << cfg.oversampling << " rounds=" << cfg.rounds
       << " mu_start=" << format_double(cfg.mu_start) << " mu_end=" << format_double(cfg.mu_end)
       << " efficiency=" << format_double(cfg.efficiency) << " goldenbaum_len=" << cfg.goldenbaum_length()
       << " obda_truncation=" << format_double(cfg.obda_truncation)
       << " obda_phase_errors=" << (cfg.obda_phase_errors ? "true" : "false")
       << " obda_phase_deg=" << format_double(cfg.obda_phase_deg) << " obda_csi=" << (cfg.obda_csi ? "true" : "false")
       << " seed=" << cfg.seed;
    return os.str();
}

inline void write_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<ResultRow>& rows)
{
    os << config_comment(cfg) << '\n' << csv_header << '\n';
    for (const auto& r : rows)
        os << r.experiment << ',' << r.method << ',' << r.K << ',' << r.U << ',' << r.L_e << ',' << r.rho << ','
           << r.snr_db << ',' << r.n_plus << ',' << r.metric << ',' << detail::format_double(r.value) << ','
           << detail::format_double(r.std_error) << '\n';
}

namespace detail {

constexpr std::uint64_t vote_tag = 0x766F746573000001ULL;
constexpr std::uint64_t link_tag = 0x6C696E6B00000002ULL;
constexpr std::uint64_t theory_tag = 0x7468656F72790003ULL;
constexpr std::uint64_t pmepr_tag = 0x706D657072000004ULL;

inline ResultRow link_row(const ExperimentConfig& cfg, std::string_view method, double snr, int n_plus,
                          std::string metric, double value, double se)
{
    return {std::string(experiment_name(cfg.experiment)),
            std::string(method),
            std::to_string(cfg.K),
            std::to_string(cfg.users),
            std::to_string(cfg.taps),
            format_double(cfg.rho),
            format_double(snr),
            std::to_string(n_plus),
            std::move(metric),
            value,
            se};
}

/// FNV-1a, stable across platforms.
inline std::uint64_t name_hash(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
        h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

inline std::uint64_t point_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t point)
{
    return mix64(mix64(master ^ tag) + point);
}

/// Errors of one trial of the vote `ell` MV for a baseline scheme.
inline bool baseline_trial_error(const ExperimentConfig& cfg, std::string_view method, double noise_var, int n_plus,
                                 std::uint64_t seed, std::uint64_t trial)
{
    const int users = cfg.users;
    auto noise_rng = stream(seed, trial, static_cast<std::uint64_t>(users));
    if (method == "goldenbaum") {
        const int len = cfg.goldenbaum_length();
        const auto powers = PdpConfig{cfg.taps, cfg.rho}.powers();
        ReceivedSequence y(len + cfg.taps - 1, cplx{0.0, 0.0});
        for (int u = 0; u < users; ++u) {
            auto rng = stream(seed, trial, static_cast<std::uint64_t>(u));
            const auto h = sample_taps(std::span<const double>(powers), rng);
            convolve_add(goldenbaum_encode(u < n_plus ? 1 : -1, len, rng), h, y);
        }
        add_noise(std::span<cplx>(y), noise_var, noise_rng);
        return is_computation_error(goldenbaum_decode(y, {len, noise_var, users}), n_plus, users);
    }
    const auto ocfg = cfg.obda();
    cplx y = noise_var > 0.0 ? complex_gaussian(noise_rng, noise_var) : cplx{0.0, 0.0};
    for (int u = 0; u < users; ++u) {
        auto rng = stream(seed, trial, static_cast<std::uint64_t>(u));
        const cplx h = complex_gaussian(rng, 1.0);
        y += h * obda_encode(u < n_plus ? 1 : -1, h, ocfg, rng);
    }
    return is_computation_error(obda_decode(y), n_plus, users);
}

struct Count {
    std::int64_t errors = 0;
    std::int64_t trials = 0;
};

/// Monte Carlo CER of vote `ell` with every other vote drawn uniformly.
inline Count monte_carlo_cer(const ExperimentConfig& cfg, std::string_view method, double snr, int n_plus,
                             std::uint64_t seed)
{
    const double noise_var = snr_db_to_noise_var(snr);
    constexpr std::int64_t chunk = 256;
    const std::int64_t chunks = (cfg.trials + chunk - 1) / chunk;
    std::vector<std::int64_t> errors(chunks, 0);
    const bool proposed = is_proposed_method(method);
    std::optional<LinkSimulator> sim;
    if (proposed)
        sim.emplace(LinkConfig{proposed_method(method), cfg.K, PdpConfig{cfg.taps, cfg.rho}, noise_var});
    parallel_for(chunks, cfg.threads, [&](std::int64_t c) {
        const std::int64_t end = std::min(cfg.trials, (c + 1) * chunk);
        std::int64_t e = 0;
        for (std::int64_t t = c * chunk; t < end; ++t) {
            const auto trial = static_cast<std::uint64_t>(t);
            if (!proposed) {
                e += baseline_trial_error(cfg, method, noise_var, n_plus, seed, trial);
                continue;
            }
            auto vrng = stream(seed ^ vote_tag, trial);
            const auto votes = sample_votes(cfg.users, sim->config().votes(), cfg.ell, n_plus, vrng);
            const auto mv = sim->decode(sim->receive(sim->encode(votes), seed, trial));
            e += is_computation_error(mv[cfg.ell], n_plus, cfg.users);
        }
        errors[c] = e;
    });
    Count out{0, cfg.trials};
    for (auto e : errors)
        out.errors += e;
    return out;
}

inline void append_link_rows(const ExperimentConfig& cfg, bool with_mc, bool with_theory, std::vector<ResultRow>& rows)
{
    struct Point {
        std::string method;
        double snr;
        int n_plus;
    };
    std::vector<Point> points;
    for (const auto& m : cfg.methods)
        for (double snr : cfg.snr_db)
            for (int n : cfg.n_plus_values())
                points.push_back({m, snr, n});

    std::vector<std::vector<ResultRow>> per_point(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!with_mc)
            continue;
        const auto c = monte_carlo_cer(cfg, p.method, p.snr, p.n_plus, point_seed(cfg.seed, link_tag, i));
        const double q = static_cast<double>(c.errors) / static_cast<double>(c.trials);
        per_point[i].push_back(link_row(cfg, p.method, p.snr, p.n_plus, "cer_mc", q,
                                        std::sqrt(q * (1.0 - q) / static_cast<double>(c.trials))));
    }
    if (with_theory) {
        parallel_for(static_cast<std::int64_t>(points.size()), cfg.threads, [&](std::int64_t i) {
            const auto& p = points[i];
            if (!is_proposed_method(p.method))
                return;
            const TheoryContext ctx{proposed_method(p.method), radius_param(cfg.K), PdpConfig{cfg.taps, cfg.rho},
                                    snr_db_to_noise_var(p.snr)};
            auto rng = stream(point_seed(cfg.seed, theory_tag, static_cast<std::uint64_t>(i)), 0);
            const auto est = vote_averaged_cer(p.n_plus, cfg.users - p.n_plus, ctx, cfg.realizations, rng, cfg.ell);
            per_point[i].push_back(link_row(cfg, p.method, p.snr, p.n_plus, "cer_theory", est.probability,
                                            est.std_error));
        });
    }
    for (auto& v : per_point)
        for (auto& r : v)
            rows.push_back(std::move(r));
}

inline double quantile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    return v[idx];
}

/// One transmitted block per draw for a method with uniformly random votes.
inline std::vector<double> pmepr_samples(const ExperimentConfig& cfg, std::string_view method)
{
    std::vector<double> out(cfg.codewords);
    const auto rp = radius_param(cfg.K);
    const ZeroToCoeffConverter conv(cfg.K);
    const std::uint64_t seed = point_seed(cfg.seed, pmepr_tag, name_hash(method));
    const bool ofdm = cfg.mapping == "ofdm";
    parallel_for(cfg.codewords, cfg.threads, [&](std::int64_t i) {
        auto rng = stream(seed, static_cast<std::uint64_t>(i));
        auto vote = [&rng] { return (rng() >> 63) ? 1 : -1; };
        ComplexVec seq;
        if (is_proposed_method(method)) {
            const auto m = proposed_method(method);
            std::vector<int> v(votes_per_codeword(m, cfg.K));
            for (auto& x : v)
                x = vote();
            seq = conv(encode(m, v, rp));
        } else if (method == "goldenbaum") {
            const int blocks = votes_per_codeword(Method::IndexBased, cfg.K);
            for (int b = 0; b < blocks; ++b) {
                const auto x = goldenbaum_encode(vote(), cfg.goldenbaum_length(), rng);
                seq.insert(seq.end(), x.begin(), x.end());
            }
            if (energy(seq) == 0.0)
                seq.assign(1, cplx{1.0, 0.0});
        } else {
            // OFDM with K+1 subcarriers under flat fading: one common channel.
            const auto ocfg = cfg.obda();
            cplx h{0.0, 0.0};
            do
                h = complex_gaussian(rng, 1.0);
            while (ocfg.channel_inversion && std::norm(h) <= ocfg.truncation);
            seq.resize(cfg.K + 1);
            for (auto& s : seq)
                s = obda_encode(vote(), h, ocfg, rng);
            out[i] = pmepr(ofdm_map_modulate(seq, cfg.oversampling));
            return;
        }
        out[i] = pmepr(ofdm ? ofdm_map_modulate(seq, cfg.oversampling) : dfts_ofdm_modulate(seq, cfg.oversampling));
    });
    return out;
}

} // namespace detail

inline std::vector<ResultRow> run_cer_sweep(const ExperimentConfig& cfg)
{
    validate(cfg);
    std::vector<ResultRow> rows;
    detail::append_link_rows(cfg, true, true, rows);
    return rows;
}

inline std::vector<ResultRow> run_snr_sweep(const ExperimentConfig& cfg)
{
    validate(cfg);
    std::vector<ResultRow> rows;
    detail::append_link_rows(cfg, true, true, rows);
    return rows;
}

inline std::vector<ResultRow> run_theory(const ExperimentConfig& cfg)
{
    validate(cfg);
    std::vector<ResultRow> rows;
    detail::append_link_rows(cfg, false, true, rows);
    return rows;
}

inline std::vector<ResultRow> run_pmepr(const ExperimentConfig& cfg)
{
    validate(cfg);
    std::vector<ResultRow> rows;
    const std::string exp(experiment_name(cfg.experiment));
    for (const auto& m : cfg.methods) {
        const auto v = detail::pmepr_samples(cfg, m);
        double mean = 0.0, sq = 0.0;
        for (double x : v) {
            mean += x;
            sq += x * x;
        }
        const double n = static_cast<double>(v.size());
        mean /= n;
        const double se = v.size() > 1 ? std::sqrt(std::max(0.0, (sq / n - mean * mean) * n / (n - 1.0)) / n) : 0.0;
        auto row = [&](std::string metric, double value, double err) {
            rows.push_back({exp, m, std::to_string(cfg.K), "", "", "", "", "", std::move(metric), value, err});
        };
        row("pmepr_mean_db", mean, se);
        for (auto [name, q] : {std::pair{"pmepr_p50_db", 0.5}, std::pair{"pmepr_p90_db", 0.9},
                               std::pair{"pmepr_p99_db", 0.99}})
            row(name, detail::quantile(v, q), 0.0);
        row("pmepr_max_db", *std::max_element(v.begin(), v.end()), 0.0);
    }
    return rows;
}

inline std::vector<ResultRow> run_rmse(const ExperimentConfig& cfg)
{
    validate(cfg);
    std::vector<ResultRow> rows;
    const std::string exp(experiment_name(cfg.experiment));
    for (const auto& m : cfg.methods) {
        MedianConfig mc;
        mc.backend = parse_backend(m);
        mc.users = cfg.users;
        mc.K = cfg.K;
        mc.rounds = cfg.rounds;
        mc.mu_start = cfg.mu_start;
        mc.mu_end = cfg.mu_end;
        mc.pdp = PdpConfig{cfg.taps, cfg.rho};
        mc.snr_db = cfg.snr_db.front();
        mc.realizations = cfg.realizations;
        mc.seed = cfg.seed;
        mc.goldenbaum_len = cfg.goldenbaum_length();
        mc.obda = cfg.obda();
        mc.threads = cfg.threads;
        const auto traj = run_median(mc);
        auto row = [&](std::string metric, double value, double err) {
            rows.push_back({exp, m, std::to_string(cfg.K), std::to_string(cfg.users), std::to_string(cfg.taps),
                            detail::format_double(cfg.rho), detail::format_double(mc.snr_db), "", std::move(metric),
                            value, err});
        };
        const int step = std::max(1, cfg.rounds / 10);
        for (int i = 0; i < cfg.rounds; i += step)
            row("rmse_round_" + std::to_string(i), traj.rmse[i], 0.0);
        row("rmse_final", traj.final(), traj.final_std_error);
    }
    return rows;
}

inline std::vector<ResultRow> run_resources(const ExperimentConfig& cfg)
{
    validate(cfg);
    std::vector<ResultRow> rows;
    const std::string exp(experiment_name(cfg.experiment));
    for (const auto& m : cfg.methods) {
        auto row = [&](std::string metric, double value) {
            rows.push_back({exp, m, std::to_string(cfg.K), std::to_string(cfg.users), std::to_string(cfg.taps), "", "",
                            "", std::move(metric), value, 0.0});
        };
        if (m == "separation") {
            row("resources_per_mv", separation_resources_per_mv(cfg.users, cfg.efficiency));
            continue;
        }
        const auto method = proposed_method(m);
        row("resources_per_mv", resources_per_mv(method, cfg.K, cfg.taps));
        row("separation_crossover_users",
            separation_crossover_users(method, cfg.K, cfg.taps, cfg.efficiency));
    }
    return rows;
}

inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.experiment) {
    case Experiment::Cer:
        return run_cer_sweep(cfg);
    case Experiment::Snr:
        return run_snr_sweep(cfg);
    case Experiment::Pmepr:
        return run_pmepr(cfg);
    case Experiment::Rmse:
        return run_rmse(cfg);
    case Experiment::Resources:
        return run_resources(cfg);
    case Experiment::Theory:
        return run_theory(cfg);
    }
    throw invalid_parameter("unknown experiment");
}

} // namespace mocz
