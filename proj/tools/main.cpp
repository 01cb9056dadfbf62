#include "commands.hpp"

#include "stablecat/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace stablecat;
using namespace stablecat::cli;

namespace {

constexpr int usage_error = 3;

std::optional<std::uint64_t> environment_seed()
{
    const char *v = std::getenv("STABLECAT_SEED");
    if (!v || !*v) return std::nullopt;
    try {
        std::size_t used = 0;
        std::uint64_t s = std::stoull(v, &used);
        if (used == std::string(v).size()) return s;
    } catch (const std::exception &) {
    }
    std::cerr << "warning: ignoring STABLECAT_SEED=" << v << " (not an unsigned integer)\n";
    return std::nullopt;
}

}

int main(int argc, char **argv)
{
    CLI::App app{"Exact computations and axiom verification for stable categories of Frobenius triples"};
    app.require_subcommand(1);

    std::string workspace, out;
    std::optional<std::uint64_t> seed, budget;
    CommandArgs args;

    for (const auto &name : command_names()) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("workspace", workspace, "workspace JSON file")->required();
        sub->add_option("--seed", seed, "seed (overrides the file and STABLECAT_SEED)");
        sub->add_option("--budget", budget, "enumeration and search limit");
        sub->add_option("--out", out, "write the JSON report here instead of stdout");
        sub->add_option("--triple", args.triple, "triple name (default: the first declared)");
        sub->add_option("--backend", args.backend, "backend name");
        sub->add_option("--object", args.object, "module name");
        sub->add_option("--direction", args.direction, "S or S*")->check(CLI::IsMember({"S", "S*"}));
        sub->add_option("--source", args.source, "source module");
        sub->add_option("--target", args.target, "target module");
        sub->add_option("--basis", args.basis, "index of the stable hom basis element");
        sub->add_option("--source2", args.source2, "source of the second morphism");
        sub->add_option("--target2", args.target2, "target of the second morphism");
        sub->add_option("--basis2", args.basis2, "basis index of the second morphism");
        sub->callback([&args, sub] { args.command = sub->get_name(); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return usage_error;
    }

    try {
        Workspace ws = load_workspace(workspace, {seed, environment_seed(), budget});
        CommandResult r = run_command(ws, args);
        const std::string text = r.report.dump(2) + "\n";
        if (out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out, std::ios::binary);
            if (!f) throw workspace_error(out + ": cannot write");
            f << text;
        }
        std::cerr << r.summary;
        return exit_code(r.status);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage_error;
    }
}
