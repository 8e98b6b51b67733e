/// The acceptance battery: one scenario per criterion, each returning a
/// ScanResult with named tolerances and provenance anchors.
#pragma once

#include "opcalc/report.hpp"
#include "opcalc/rng.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace opcalc {

struct AcceptanceConfig {
    int grid_flagship = 128;  // criteria 1 and 3
    int grid_standard = 64;
    int grid_small = 32;
    double box = 8.0;
    int dim = 3;
    std::uint64_t seed = DEFAULT_SEED;
    std::map<std::string, double> tol; // named tolerance overrides
    std::vector<int> only;             // subset of criteria (1-based); empty = all

    double get_tol(const std::string& key, double fallback) const {
        auto it = tol.find(key);
        return it == tol.end() ? fallback : it->second;
    }
    bool selected(int k) const {
        if (only.empty()) return true;
        for (int o : only)
            if (o == k) return true;
        return false;
    }
};

// runs the selected criteria; prints one "PASS/FAIL k. name" line per
// criterion to `log` when given
std::vector<ScanResult> run_acceptance(const AcceptanceConfig& cfg,
                                       std::ostream* log = nullptr);

} // namespace opcalc
