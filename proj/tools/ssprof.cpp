#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ssprof/config.hpp"
#include "ssprof/pipeline.hpp"

namespace {

const char* kUsage =
    "usage: ssprof <command> [--config FILE] [--section.key=value ...]\n"
    "\n"
    "commands:\n"
    "  solve-expander    construct a profile, extend it, run all verdicts\n"
    "  verify-residuals  substitute a profile CSV into the expander system\n"
    "  scan              run a parameter lattice (scan.spec), point statuses\n"
    "  shrinker-audit    non-existence energy audit of a candidate\n"
    "  constants         search the bootstrap constant chain\n"
    "\n"
    "Config is line-oriented 'section.key = value'. Flags of the form\n"
    "--section.key=value override config keys. --jobs N is shorthand for\n"
    "--scan.jobs=N. $SSPROFILE_OUT overrides output.dir.\n";

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return 2;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        std::cout << kUsage;
        return 0;
    }

    std::string config_text;
    std::vector<std::string> overrides;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" || arg == "-c") {
            if (i + 1 >= argc) {
                std::cerr << "ssprof: --config needs a path\n";
                return 2;
            }
            std::ifstream in(argv[++i]);
            if (!in) {
                std::cerr << "ssprof: cannot open config " << argv[i] << "\n";
                return 2;
            }
            std::ostringstream ss;
            ss << in.rdbuf();
            config_text = ss.str();
        } else if (arg == "--jobs" && i + 1 < argc) {
            overrides.push_back(std::string("scan.jobs = ") + argv[++i]);
        } else if (arg.rfind("--", 0) == 0) {
            const auto eq = arg.find('=');
            if (eq == std::string::npos) {
                std::cerr << "ssprof: expected --key=value, got " << arg << "\n";
                return 2;
            }
            overrides.push_back(arg.substr(2, eq - 2) + " = " + arg.substr(eq + 1));
        } else {
            std::cerr << "ssprof: unexpected argument " << arg << "\n";
            return 2;
        }
    }

    try {
        ssprof::RunConfig cfg = ssprof::parse_config(config_text);
        for (const auto& line : overrides) ssprof::apply_config_line(cfg, line, 0);
        if (cfg.physics.alpha == 1.0)
            cfg.boundary.theta0 =
                ssprof::BoundaryData::forced_theta0(cfg.physics, cfg.boundary.a_slope);
        ssprof::validate_config(cfg);
        cfg.command = command;
        return ssprof::run_pipeline(cfg);
    } catch (const std::exception& e) {
        std::cerr << "ssprof: " << e.what() << "\n";
        return 2;
    }
}
