#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "rdlab/errors.hpp"
#include "scenarios.hpp"

#ifndef RDLAB_VERSION
#define RDLAB_VERSION "0.0.0"
#endif

using namespace rdlab::cli;

int main(int argc, char** argv) {
    CLI::App app{"rdlab: reaction-diffusion barrier and uniqueness experiments"};
    app.set_version_flag("--version", RDLAB_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    RunOptions ro;
    ro.version = RDLAB_VERSION;
    const char* env_out = std::getenv("RDLAB_OUT");
    ro.out_dir = env_out && *env_out ? env_out : "rdlab_out";
    ro.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    auto* run = app.add_subcommand("run", "execute the scenarios of a config");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", ro.out_dir, "output directory (default $RDLAB_OUT or rdlab_out)");
    run->add_option("--jobs", ro.jobs, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--filter", ro.filter, "scenario id glob");
    run->add_flag("--strict", ro.strict, "treat inconclusive verdicts as failures");

    auto* describe = app.add_subcommand("describe", "print scenarios with parameters and artifacts");
    describe->add_option("config", config_path, "config file")->required();
    auto* list = app.add_subcommand("list", "print scenario ids and kinds");
    list->add_option("config", config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        Plan plan = build_plan(load_config(config_path));
        if (*describe) {
            std::cout << describe_table(plan);
            return 0;
        }
        if (*list) {
            std::cout << list_table(plan);
            return 0;
        }
        return run_plan(plan, ro, std::cout);
    } catch (const rdlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
