/// \file vortexforge.cpp
/// \brief Command line driver for the vortex soliton solvers.
///
/// All numerical parameters live in a key=value config file; the flags only
/// locate that file and optionally override the mode and output directory so
/// one config can drive several runs.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vortexforge/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"vortexforge: ring-profiled vortex soliton pairs in quadratic media"};

    std::string config_path;
    std::string mode_override;
    std::string out_override;
    app.add_option("-c,--config", config_path, "key=value config file")->required();
    app.add_option("-m,--mode", mode_override,
                   "override mode (minimize|mpass|refine|verify|sweep|quadcheck)");
    app.add_option("-o,--out", out_override, "override output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        vortex::RunConfig config = vortex::RunConfig::from_file(config_path);
        if (!mode_override.empty()) {
            config.set("mode", mode_override);
        }
        if (!out_override.empty()) {
            config.set("out", out_override);
        }
        return vortex::run(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
