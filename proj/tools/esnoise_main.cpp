#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "esnoise/cli/config.hpp"
#include "esnoise/cli/scenario.hpp"

int main(int argc, char** argv) {
    using namespace esnoise;

    CLI::App app{"Noisy echo state network experiment runner"};
    std::string scenario, config_path, kernel, emit, simd, boundary;
    std::string out_dir = "out";
    uint64_t seed = 0;
    int trials = 0;
    int threads = 0;

    app.add_option("--scenario", scenario, "scenario name")
        ->check(CLI::IsMember(cli::scenario_names()));
    app.add_option("--config", config_path,
                   "config file (key = value lines, or a run manifest)");
    app.add_option("--seed", seed, "noise master seed");
    app.add_option("--trials", trials, "ensemble size K");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--kernel", kernel, "band weight kernel")
        ->check(CLI::IsMember({"symmetric", "literal"}));
    app.add_option("--emit", emit, "artifact kinds")
        ->check(CLI::IsMember({"csv", "svg", "both"}));
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--simd", simd, "kernel variant")
        ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

    CLI11_PARSE(app, argc, argv);

    try {
        cli::RunConfig cfg;
        if (!config_path.empty()) cfg = cli::load_config(config_path);
        if (app.count("--seed")) cfg.set("seed", std::to_string(seed));
        if (app.count("--trials")) cfg.set("trials", std::to_string(trials));
        if (app.count("--threads")) cfg.set("threads", std::to_string(threads));
        if (!kernel.empty()) cfg.set("kernel", kernel);
        if (!emit.empty()) cfg.set("emit", emit);
        if (!simd.empty()) cfg.set("simd", simd);

        std::string name = scenario.empty() ? cfg.scenario : scenario;
        if (name.empty()) {
            std::cerr << "error: no scenario given (use --scenario or a config "
                         "with a scenario key)\n";
            return 1;
        }
        const cli::RunConfig resolved =
            cli::resolve_scenario(cli::scenario_from_string(name), cfg);
        const cli::ScenarioResult result = cli::run_scenario(resolved, out_dir);
        for (const auto& path : result.artifacts)
            std::cout << path.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
