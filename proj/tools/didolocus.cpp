// Command-line driver: didolocus <command> --config <path.json> [--out <dir>]
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "didolocus/error.hpp"
#include "didolocus/io.hpp"

namespace {

const char* describe(const std::string& cmd) {
    if (cmd == "geodesic") return "integrate one geodesic, write trajectory.csv";
    if (cmd == "front") return "wave front mesh at fixed arclength, write front.csv and front.svg";
    if (cmd == "conjugate") return "first conjugate points over a phi x rho grid, write conjugate.csv";
    if (cmd == "section") return "numerical conjugate-locus sections, write section_<k>.csv/.svg";
    if (cmd == "asymptotic") return "expansion curves and the formula audit, write asymptotic_*.csv and audit.txt";
    if (cmd == "classify") return "cusps, crossings and symbol of sections, write classify.json";
    if (cmd == "stratify") return "genericity stratum of the metric germ, write stratify.json";
    if (cmd == "sweep") return "stratum along a one-parameter family, write sweep.csv and sweep.json";
    return "numerical against asymptotic section residuals, write compare.csv";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conjugate loci of Dido-type sub-Riemannian problems"};
    app.require_subcommand(1, 1);
    std::string config, out = ".";
    for (const auto& name : didolocus::command_names()) {
        auto* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory")->capture_default_str();
    }
    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const auto cfg = didolocus::load_run_config(config);
        std::printf("%s\n", didolocus::run_command(command, cfg, out).c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "didolocus %s: %s\n", command.c_str(), e.what());
        return 1;
    }
    return 0;
}
