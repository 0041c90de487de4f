// Command-line front end: vdyn <subcommand> <config> [options]
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vdyn/config.hpp"
#include "vdyn/errors.hpp"
#include "vdyn/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "key = value configuration file");
    cmd->add_option("--preset", args.preset, "use a built-in preset (scenario-a, scenario-b)");
    cmd->add_option("-o,--out", args.out_dir, "output directory (overrides output_dir)");
}

vdyn::RunConfig resolve(const CommonArgs& args) {
    if (!args.config_path.empty() && !args.preset.empty()) {
        throw vdyn::ValidationError("config", "give a config file or --preset, not both");
    }
    vdyn::RunConfig config;
    if (!args.config_path.empty()) {
        config = vdyn::load_config(args.config_path);
    } else if (!args.preset.empty()) {
        config = vdyn::preset_config(args.preset);
    } else {
        throw vdyn::ValidationError("config", "a config file or --preset is required");
    }
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffusive within-host infection model: NSFD simulation, R0, equilibria, PRCC"};
    app.require_subcommand(1);

    CommonArgs simulate_args, r0_args, eq_args, sens_args, diff_args, sfd_args;
    auto* simulate = app.add_subcommand("simulate", "run the scheme and write trajectory, Lyapunov and summary files");
    add_common(simulate, simulate_args);
    auto* r0 = app.add_subcommand("r0", "print the reproduction number breakdown");
    add_common(r0, r0_args);
    auto* equilibria = app.add_subcommand("equilibria", "print the steady states");
    add_common(equilibria, eq_args);
    auto* sensitivity = app.add_subcommand("sensitivity", "LHS/PRCC study of R0; writes tornado.csv/svg");
    add_common(sensitivity, sens_args);
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    sensitivity->add_option("-n,--samples", samples, "number of LHS samples");
    sensitivity->add_option("--seed", seed, "RNG seed");
    auto* compare_diffusion = app.add_subcommand("compare-diffusion", "compare final states for two diffusion levels");
    add_common(compare_diffusion, diff_args);
    double d_low = 1.0;
    double d_high = 100.0;
    compare_diffusion->add_option("--d-low", d_low, "D1 = D2 = D3 for the first run")->capture_default_str();
    compare_diffusion->add_option("--d-high", d_high, "D1 = D2 = D3 for the second run")->capture_default_str();
    auto* compare_sfd = app.add_subcommand("compare-sfd", "run NSFD and the explicit baseline side by side");
    add_common(compare_sfd, sfd_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : vdyn::kExitValidation;
    }

    try {
        if (*simulate) {
            const auto config = resolve(simulate_args);
            return vdyn::run_simulate(config, config.output_dir, std::cout);
        }
        if (*r0) return vdyn::run_r0(resolve(r0_args), std::cout);
        if (*equilibria) return vdyn::run_equilibria(resolve(eq_args), std::cout);
        if (*sensitivity) {
            auto config = resolve(sens_args);
            if (samples) config.sensitivity.n_samples = *samples;
            if (seed) config.seed = *seed;
            return vdyn::run_sensitivity(config, config.output_dir, std::cout);
        }
        if (*compare_diffusion) {
            const auto config = resolve(diff_args);
            return vdyn::run_compare_diffusion(config, d_low, d_high, config.output_dir, std::cout);
        }
        if (*compare_sfd) {
            const auto config = resolve(sfd_args);
            return vdyn::run_compare_sfd(config, config.output_dir, std::cout);
        }
    } catch (const vdyn::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return vdyn::kExitValidation;
    } catch (const vdyn::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return vdyn::kExitValidation;
    } catch (const vdyn::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return vdyn::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return vdyn::kExitNumerical;
    }
    return vdyn::kExitOk;
}
