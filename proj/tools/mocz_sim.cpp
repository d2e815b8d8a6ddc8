// Experiment driver: mocz_sim <cer|snr|pmepr|rmse|resources|theory> [flags]

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mocz_oac/experiments.hpp>

int main(int argc, char** argv)
{
    CLI::App app{"Majority-vote over-the-air computation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::int64_t> trials;
    std::optional<int> threads;
    std::vector<std::string> settings;

    app.add_option("--config", config_path, "flat key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "CSV output path (default: stdout)");
    app.add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", settings, "extra key=value overrides")->allow_extra_args(false);

    for (auto kind : {mocz::Experiment::Cer, mocz::Experiment::Snr, mocz::Experiment::Pmepr, mocz::Experiment::Rmse,
                      mocz::Experiment::Resources, mocz::Experiment::Theory})
        app.add_subcommand(std::string(mocz::experiment_name(kind)))->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        mocz::ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            mocz::apply_config_text(cfg, in);
        }
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw mocz::invalid_parameter("--set expects key=value, got '" + s + "'");
            mocz::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        cfg.experiment = mocz::parse_experiment(app.get_subcommands().front()->get_name());
        if (seed)
            cfg.seed = *seed;
        if (out)
            cfg.out = *out;
        if (trials)
            cfg.trials = *trials;
        if (threads)
            cfg.threads = *threads;

        const auto rows = mocz::run_experiment(cfg);
        if (cfg.out.empty() || cfg.out == "-") {
            mocz::write_csv(std::cout, cfg, rows);
        } else {
            std::ofstream os(cfg.out, std::ios::binary);
            if (!os)
                throw mocz::invalid_parameter("cannot open output file '" + cfg.out + "'");
            mocz::write_csv(os, cfg, rows);
        }
    } catch (const std::exception& e) {
        std::cerr << "mocz_sim: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
