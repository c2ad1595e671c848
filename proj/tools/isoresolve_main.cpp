#include <iostream>

#include <CLI11.hpp>

#include "isoresolve/commands.hpp"
#include "isoresolve/run_io.hpp"

int main(int argc, char** argv) {
    using namespace isoresolve;
    CLI::App app{"Radial Hardy-Sobolev solver on isoparametric profiles"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CommandOptions opts;
    std::vector<double> bracket;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "run configuration file")->required();
        sub->add_option("--out", opts.out, "output root (ISORESOLVE_OUT overrides)");
        sub->add_option("--mesh-n", opts.mesh_n, "number of mesh cells");
    };

    auto* ground = app.add_subcommand("solve-ground", "positive least-energy solution");
    common(ground);

    auto* nodal = app.add_subcommand("solve-nodal", "sign-changing solution with a given nodal count");
    common(nodal);
    nodal->add_option("--level", opts.level, "number of sign changes");

    auto* shoot = app.add_subcommand("shoot", "initial value problem or two-sided matching");
    common(shoot);
    auto* phi0 = shoot->add_option("--phi0", opts.phi0, "single shot with phi(0) = phi0");
    shoot->add_option("--bracket", bracket, "bracket for phi(0)")->expected(2)->excludes(phi0);
    shoot->add_option("--parity", opts.parity, "even or odd")->check(CLI::IsMember({"even", "odd"}));

    auto* sweep = app.add_subcommand("sweep", "C0 bound sweep over k and q families");
    common(sweep);
    sweep->add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "re-derive a run directory from its artifacts");
    verify->add_option("run_dir", opts.run_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (bracket.size() == 2) opts.bracket = std::make_pair(bracket[0], bracket[1]);

    CommandResult result;
    if (ground->parsed()) result = cmd_solve_ground(opts, std::cout, std::cerr);
    else if (nodal->parsed()) result = cmd_solve_nodal(opts, std::cout, std::cerr);
    else if (shoot->parsed()) result = cmd_shoot(opts, std::cout, std::cerr);
    else if (sweep->parsed()) result = cmd_sweep(opts, std::cout, std::cerr);
    else result = cmd_verify(opts, std::cout, std::cerr);
    return result.exit_code;
}
