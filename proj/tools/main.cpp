#include "commands.hpp"
#include "scenario.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

int main(int argc, char** argv)
{
    using namespace mtsfm::tools;

    CLI::App app{"multi-tone sinusoidal FM waveform design and sidelobe "
                 "optimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string design_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> rng_seed;
    std::optional<int> p_order;
    std::optional<double> outer_fraction;
    bool quiet = false;

    const auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* config_option = cmd->add_option(
            "--config", config_path, "scenario configuration file");
        if (config_required) {
            config_option->required();
        }
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--seed", rng_seed, "seed rng override");
        cmd->add_option("--p", p_order, "sidelobe norm order override");
        cmd->add_option("--region", outer_fraction,
                        "sidelobe region outer-fraction override");
        cmd->add_flag("--quiet", quiet,
                      "suppress progress and summary printing");
    };

    CLI::App* synth = app.add_subcommand(
        "synth", "render a seed design and its analysis products");
    add_common(synth, true);
    CLI::App* optimize = app.add_subcommand(
        "optimize", "run the sidelobe descent from the scenario seed");
    add_common(optimize, true);
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "report metrics for an existing design file");
    evaluate->add_option("design", design_path, "design file to evaluate")
        ->required();
    add_common(evaluate, false);
    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "compare analytic gradients against finite differences");
    add_common(gradcheck, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        ScenarioConfig config;
        if (!config_path.empty()) {
            config = load_scenario(config_path);
        }
        Overrides overrides;
        overrides.out_dir = out_dir;
        overrides.rng_seed = rng_seed;
        if (p_order) {
            overrides.p = static_cast<double>(*p_order);
        }
        overrides.outer_fraction = outer_fraction;
        apply_overrides(config, overrides);

        if (synth->parsed()) {
            config.validate();
            return cmd_synth(config, quiet);
        }
        if (optimize->parsed()) {
            config.validate();
            return cmd_optimize(config, quiet);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(design_path, config, quiet);
        }
        if (gradcheck->parsed()) {
            config.validate();
            return cmd_gradcheck(config, quiet);
        }
        return kExitFailure;
    } catch (const std::exception& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return exit_code_for_current_exception();
    }
}
