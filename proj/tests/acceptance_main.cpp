// Acceptance gate: one pass/fail line per criterion, exit 0 only when all pass.
#include "opcalc/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    opcalc::AcceptanceConfig cfg;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--grid") {
            cfg.grid_flagship = std::stoi(next());
        } else if (arg == "--grid-standard") {
            cfg.grid_standard = std::stoi(next());
        } else if (arg == "--only") {
            cfg.only.push_back(std::stoi(next()));
        } else if (arg == "--seed") {
            cfg.seed = std::stoull(next());
        } else {
            std::cerr << "unknown flag " << arg << "\n";
            return 2;
        }
    }
    std::vector<opcalc::ScanResult> results = opcalc::run_acceptance(cfg, &std::cout);
    bool all = true;
    for (const auto& r : results) all = all && r.all_pass();
    std::cout << (all ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: failures present")
              << std::endl;
    return all ? 0 : 1;
}
