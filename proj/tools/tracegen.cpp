// Command-line front door: analyze / solve / generate / verify / oracle.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tracegen/cli.hpp"
#include "tracegen/scenarios.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string out_path;
    std::string scenario;
    std::string remove_letter;
    std::string increments_path;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t budget = 0;
    std::size_t depth = 6;
};

tracegen::CommonOptions common_options(const CLI::App& cmd, const Flags& flags) {
    tracegen::CommonOptions opts;
    if (cmd.count("--seed"))
        opts.seed = flags.seed;
    if (cmd.count("--samples"))
        opts.samples = flags.samples;
    if (cmd.count("--budget"))
        opts.budget = flags.budget;
    if (cmd.count("--out"))
        opts.out_path = flags.out_path;
    return opts;
}

int with_output(const tracegen::CommonOptions& opts, const std::function<int(std::ostream&)>& fn) {
    if (opts.out_path) {
        std::ofstream out(*opts.out_path);
        if (!out)
            throw tracegen::InputError("cannot write " + *opts.out_path);
        return fn(out);
    }
    return fn(std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synchronization trace monoids: analysis, parameter solving and random generation"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", flags.seed, "master seed");
        cmd->add_option("--samples", flags.samples, "sample count override");
        cmd->add_option("--budget", flags.budget, "work budget override");
        cmd->add_option("--out", flags.out_path, "output path (default stdout)");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "report the synchronization monoid");
    analyze->add_option("--config", flags.config_path, "config file")->required();
    add_common(analyze);

    CLI::App* solve = app.add_subcommand("solve", "solve local distributions for target measures");
    solve->add_option("--config", flags.config_path, "config file with [targets]")->required();
    solve->add_option("--remove", flags.remove_letter, "ring letter to remove (default: first)");
    add_common(solve);

    CLI::App* generate = app.add_subcommand("generate", "generate a random trace");
    generate->add_option("--config", flags.config_path, "config file with [dists] and [run]")
        ->required();
    generate->add_option("--log-increments", flags.increments_path,
                         "write pfsa increments to this path");
    add_common(generate);

    CLI::App* verify = app.add_subcommand("verify", "run acceptance scenarios");
    verify->add_option("--scenario", flags.scenario, "scenario name (default: all acceptance)");
    verify->add_flag_callback(
        "--list",
        [] {
            for (const auto& info : tracegen::scenario_list())
                std::cout << info.name << "  - " << info.summary << "\n";
            std::exit(tracegen::kExitPass);
        },
        "list scenarios and exit");
    add_common(verify);

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross checks on a small monoid");
    oracle->add_option("--config", flags.config_path, "config file")->required();
    oracle->add_option("--depth", flags.depth, "enumeration depth (default 6)");
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            auto cfg = tracegen::parse_config_file(flags.config_path);
            return with_output(common_options(*analyze, flags),
                               [&](std::ostream& os) { return tracegen::cmd_analyze(cfg, os); });
        }
        if (solve->parsed()) {
            auto cfg = tracegen::parse_config_file(flags.config_path);
            auto opts = common_options(*solve, flags);
            std::optional<std::string> remove;
            if (solve->count("--remove"))
                remove = flags.remove_letter;
            return tracegen::cmd_solve(cfg, opts, remove, std::cout);
        }
        if (generate->parsed()) {
            auto cfg = tracegen::parse_config_file(flags.config_path);
            auto opts = common_options(*generate, flags);
            std::optional<std::string> increments;
            if (generate->count("--log-increments"))
                increments = flags.increments_path;
            return with_output(opts, [&](std::ostream& os) {
                return tracegen::cmd_generate(cfg, opts, increments, os);
            });
        }
        if (verify->parsed()) {
            auto opts = common_options(*verify, flags);
            std::optional<std::string> scenario;
            if (verify->count("--scenario"))
                scenario = flags.scenario;
            return tracegen::cmd_verify(scenario, opts, std::cout);
        }
        if (oracle->parsed()) {
            auto cfg = tracegen::parse_config_file(flags.config_path);
            return with_output(common_options(*oracle, flags), [&](std::ostream& os) {
                return tracegen::cmd_oracle(cfg, common_options(*oracle, flags), flags.depth, os);
            });
        }
    } catch (const tracegen::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return tracegen::kExitUsage;
    } catch (const tracegen::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return tracegen::kExitResource;
    } catch (const tracegen::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tracegen::kExitFail;
    }
    return tracegen::kExitUsage;
}
