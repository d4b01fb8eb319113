#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "torwalk/config.hpp"
#include "torwalk/errors.hpp"
#include "torwalk/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"torwalk - affine random walks on the torus: simulation and diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 0;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--threads", threads, "worker thread count");
    run->add_option("--out", out_dir, "output directory override");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("--config", validate_path, "experiment config (JSON)")->required();

    std::string preset_name;
    std::string preset_out;
    auto* preset = app.add_subcommand("preset", "write a built-in measure definition");
    preset->add_option("name", preset_name, "golden | linear-only | rational-v | golden-v")
        ->required();
    preset->add_option("--out", preset_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            torwalk::ExperimentConfig cfg = torwalk::load_config(config_path);
            if (seed_opt->count() > 0) {
                cfg.seed = seed;
                cfg.resolved["seed"] = seed;
            }
            if (threads > 0) {
                cfg.threads = threads;
                cfg.resolved["threads"] = threads;
            }
            if (!out_dir.empty()) {
                cfg.out_dir = out_dir;
                cfg.resolved["out"] = out_dir;
            }
            const int status = torwalk::run_experiment(cfg);
            std::cout << (status == 0 ? "pass" : "FAIL") << ": " << cfg.kind << " -> "
                      << cfg.out_dir << "/summary.json\n";
            return status;
        }
        if (app.got_subcommand(validate)) {
            torwalk::ExperimentConfig cfg = torwalk::load_config(validate_path);
            std::cout << "valid: kind=" << cfg.kind << " seed=" << cfg.seed << "\n";
            return 0;
        }
        if (app.got_subcommand(preset)) {
            torwalk::Json j = torwalk::preset_measure(preset_name);
            torwalk::write_json_file(preset_out, j);
            std::cout << "wrote " << preset_out << "\n";
            return 0;
        }
    } catch (const torwalk::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
