// Experiment runner: `hcx run --config file.json` or `hcx <experiment> [--toy name] [--out dir] [--seed n]`.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hcx/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Singular-perturbation expansion and high-contrast diffusion experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string toy;
    std::optional<int> order;

    auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--seed", seed, "random seed (overrides the config)");

    std::vector<std::pair<CLI::App*, hcx::ExperimentKind>> shortcuts;
    for (auto kind : {hcx::ExperimentKind::Check, hcx::ExperimentKind::Expand, hcx::ExperimentKind::Sweep,
                      hcx::ExperimentKind::Monotone, hcx::ExperimentKind::Precond, hcx::ExperimentKind::Oracle}) {
        auto* sub = app.add_subcommand(hcx::to_string(kind), "run '" + hcx::to_string(kind) + "' with default settings");
        sub->add_option("--toy", toy, "builtin form pair: diag2 or coupled2");
        sub->add_option("--out", out_dir, "output directory (default ./out)");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("-k,--order", order, "expansion order");
        shortcuts.emplace_back(sub, kind);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hcx::kExitConfig;
    }

    hcx::ExperimentConfig config;
    try {
        if (run->parsed()) {
            config = hcx::load_config(config_path);
        } else {
            for (const auto& [sub, kind] : shortcuts) {
                if (!sub->parsed()) continue;
                config = hcx::default_config(kind);
                if (!toy.empty()) {
                    if (toy != "diag2" && toy != "coupled2")
                        throw hcx::Error(hcx::ErrorCode::ConfigInvalid, "toy must be diag2 or coupled2");
                    config.toy = toy;
                }
            }
        }
        if (seed) config.seed = *seed;
        if (order) {
            if (*order < 0 || *order > hcx::kMaxExpansionOrder)
                throw hcx::Error(hcx::ErrorCode::ConfigInvalid, "order out of range");
            config.k = *order;
        }
        if (!out_dir.empty()) config.output = out_dir;
    } catch (const hcx::Error& e) {
        std::cerr << e.what() << '\n';
        return hcx::kExitConfig;
    }

    const bool color = std::getenv("NO_COLOR") == nullptr;
    return hcx::run_experiment(config, config.output, std::cout, color).exit_code;
}
