#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "app/commands.hpp"
#include "ricciglue/version.hpp"

using namespace ricciglue;

int main(int argc, char** argv) {
    CLI::App cli{"Ricci-positive gluing of block-symmetric metrics"};
    cli.set_version_flag("--version", std::string(kVersion));
    cli.require_subcommand(1);
    cli.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> grid, max_halvings;
    std::optional<double> floor, fd_step;
    cli.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    cli.add_option("--out", out_dir, "output directory");
    cli.add_option("--grid", grid, "sample points per unit length");
    cli.add_option("--floor", floor, "Ricci floor for the searches");
    cli.add_option("--fd-step", fd_step, "finite-difference step");
    cli.add_option("--max-halvings", max_halvings, "depth cap of the halving searches");

    cli.add_subcommand("glue", "glue two block curves along their boundary");
    cli.add_subcommand("ellipsoid", "build the solid ellipsoid and certify its double");
    cli.add_subcommand("family", "uniform gluing parameters for a cap family");
    cli.add_subcommand("selftest", "oracle cross-checks");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : app::kConfigError;
    }

    app::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = app::load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::exit_code(e.kind());
    }
    if (out_dir) cfg.output_dir = *out_dir;
    if (grid) cfg.search.grid = *grid;
    if (floor) cfg.search.floor = *floor;
    if (fd_step) cfg.search.fd_step = *fd_step;
    if (max_halvings) cfg.search.max_halvings = *max_halvings;

    const std::string name = cli.get_subcommands().front()->get_name();
    auto cmd = name == "glue"        ? app::cmd_glue
               : name == "ellipsoid" ? app::cmd_ellipsoid
               : name == "family"    ? app::cmd_family
                                     : app::cmd_selftest;
    return app::run_command(cmd, cfg, std::cout, std::cerr);
}
