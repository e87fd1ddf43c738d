#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roughheat/config.hpp"
#include "roughheat/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"roughheat: spectral experiments for rough quasilinear initial value problems"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<long> seeds;

    for (const std::string& name : roughheat::experiments::experiment_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seeds, "seed list (repeatable)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    roughheat::config::Config cfg;
    try {
        if (!config_path.empty()) cfg = roughheat::config::Config::parse_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        const auto res = roughheat::experiments::run_experiment(name, cfg, out_dir, seeds);
        for (const auto& c : res.checks)
            std::printf("%s %s: %s\n", c.pass ? "[PASS]" : "[FAIL]", c.name.c_str(),
                        c.detail.c_str());
        std::printf("%s\n", res.pass ? "RESULT: PASS" : "RESULT: FAIL");
        return res.pass ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
