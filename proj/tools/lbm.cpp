#include <iostream>

#include "CLI11.hpp"
#include "eclbm/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Energy-conserving MRT lattice Boltzmann experiments"};
    app.require_subcommand(1);
    eclbm::CommandOptions opt;
    std::string out_path, snap_fmt;
    for (const char* name : {"constraints", "zero-point", "relax-wave", "disc"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "config file")->required();
        sub->add_option("--out", out_path, "write CSV here instead of stdout");
        if (std::string(name) == "disc")
            sub->add_option("--snapshot-format", snap_fmt, "csv or binary (overrides the config)")
                ->check(CLI::IsMember({"csv", "binary"}));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : eclbm::kExitConfig;
    }
    if (!out_path.empty()) opt.out_path = out_path;
    if (!snap_fmt.empty()) opt.snapshot_format = snap_fmt;
    const std::string cmd = app.get_subcommands().front()->get_name();
    return eclbm::run_command(cmd, opt, std::cout, std::cerr);
}
