// Batch front-end: one experiment per invocation, artifacts written to --out.
#include "ruenergy/ruenergy.h"

#include <CLI11.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = ".";
    std::uint64_t seed = 0;
    int trials = 0;
    bool plot = false;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Waveform and transmission-mode energy-efficiency experiments"};
    app.set_version_flag("--version", std::string(rue_version()));
    app.require_subcommand(1);

    Options opt;
    const std::pair<const char*, const char*> commands[] = {
        {"papr", "PAPR CCDF of CP-OFDM and DFT-s-OFDM"},
        {"evm-sweep", "EVM versus output backoff, plus constellations"},
        {"min-backoff", "minimum EVM-compliant backoff per waveform"},
        {"crossover", "SIMO/MIMO RU power crossover"},
        {"sweep-se", "RU power and EE per transmission mode over an SE grid"},
        {"optimize-ee", "EE-optimal operating point per transmission mode"},
    };
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> seed_flags;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "scenario file (defaults when omitted)")->check(CLI::ExistingFile);
        sub->add_option("--set", opt.overrides, "override section.key=value (repeatable)");
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        seed_flags.push_back(sub->add_option("--seed", opt.seed, "RNG seed"));
        sub->add_option("--trials", opt.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
        sub->add_flag("--plot", opt.plot, "also write SVG plots");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        std::vector<const char*> overrides;
        for (const auto& o : opt.overrides) overrides.push_back(o.c_str());
        rue_experiment spec{};
        spec.command = commands[i].first;
        spec.config_path = opt.config.c_str();
        spec.overrides = overrides.data();
        spec.num_overrides = overrides.size();
        spec.out_dir = opt.out.c_str();
        spec.has_seed = seed_flags[i]->count() > 0;
        spec.seed = opt.seed;
        spec.trials = opt.trials;
        spec.plot = opt.plot ? 1 : 0;
        return rue_run_experiment(&spec);
    }
    return 2;
}
