#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "spacdc/cli.hpp"
#include "spacdc/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "spacdc: straggler-tolerant approximate coded computation with masked inputs\n"
        "and encrypted master<->worker transport, plus a coded training loop"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario;
    std::string out_dir;
    std::string input;
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--seed", seed, "base seed for every random stream");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--scenario", scenario, "experiment preset s1|s2|s3|s4");
    app.add_option("--input", input, "input matrix file (shorthand for input.matrix)");
    app.add_option("--set", sets, "extra key=value override (repeatable)");

    app.add_subcommand("encode", "encode an input matrix into encrypted share files");
    app.add_subcommand("run", "run one coded job on the simulated cluster");
    app.add_subcommand("train", "train a small network with coded backprop");
    app.add_subcommand("audit", "statistical privacy audit of colluder views");
    app.add_subcommand("bench", "time encode/decode scaling and emit CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : spacdc::cli::kExitConfig;
    }

    std::vector<std::pair<std::string, std::string>> overrides;
    if (app.count("--seed") > 0) overrides.emplace_back("seed", std::to_string(seed));
    if (!out_dir.empty()) overrides.emplace_back("output.dir", out_dir);
    if (!input.empty()) overrides.emplace_back("input.matrix", input);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "config error: --set expects key=value, got '" << kv << "'\n";
            return spacdc::cli::kExitConfig;
        }
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }

    try {
        const auto cfg = spacdc::cli::load_config(config_path, scenario, overrides);
        return spacdc::cli::dispatch(app.get_subcommands().front()->get_name(), cfg);
    } catch (const spacdc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return spacdc::cli::kExitConfig;
    } catch (const spacdc::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return spacdc::cli::kExitIo;
    }
}
