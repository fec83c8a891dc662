// matmi forward|invert|study|phantom --config <path> [--out <dir>] [--seed <u64>]

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "matmi/commands.hpp"
#include "matmi/config.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"MAT-MI conductivity reconstruction"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;

    for (const char* name : {"forward", "invert", "study", "phantom"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration (key = value)")
            ->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "random seed (overrides seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : matmi::kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    matmi::RunConfig config;
    try {
        config = matmi::load_config(config_path);
        config.command = matmi::parse_command(sub->get_name());
        if (sub->count("--out") > 0) config.output_dir = out_dir;
        if (sub->count("--seed") > 0) config.seed = seed;
        matmi::validate(config);
    } catch (...) {
        return matmi::exit_code_for_current_exception(std::cerr);
    }
    return matmi::run_command(config, std::cout, std::cerr);
}
