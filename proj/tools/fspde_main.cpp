#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fspde/commands.hpp"
#include "fspde/common.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fractional stochastic heat equation laboratory"};
    app.set_version_flag("--version", std::string(fspde::kVersion));
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t refine = 3;
    std::string which = "kernel";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "experiment config (JSON); defaults apply when omitted")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "master seed (overrides the config)");
        cmd->add_option("--out", out, "output directory (overrides the config)");
    };
    auto* simulate = app.add_subcommand("simulate", "solve by Picard iteration and/or spectral Galerkin");
    auto* verify = app.add_subcommand("verify", "run a numerical check and write its report");
    auto* holder = app.add_subcommand("holder", "estimate temporal Hoelder exponents over an ensemble");
    auto* compare = app.add_subcommand("compare", "mild vs Galerkin distance under joint refinement");
    for (auto* cmd : {simulate, verify, holder, compare}) add_common(cmd);
    verify->add_option("--which", which, "kernel | bound-i | lemma1 | eq44 | factorization")
        ->check(CLI::IsMember({"kernel", "bound-i", "lemma1", "eq44", "factorization"}));
    verify->add_option("--refine", refine, "time refinement levels (factorization)");
    compare->add_option("--refine", refine, "joint refinement levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fspde::kExitConfig;
    }

    fspde::CommandOptions options;
    options.refine = refine;
    options.which = which;
    if (!out.empty()) options.out = out;
    for (auto* cmd : {simulate, verify, holder, compare}) {
        if (cmd->parsed() && cmd->count("--seed")) options.seed = seed;
    }
    const auto* chosen = app.get_subcommands().front();
    return fspde::run_command(chosen->get_name(), config, options, std::cout, std::cerr);
}
