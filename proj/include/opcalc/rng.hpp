/// Deterministic seeded random fields for probe-based norm estimates and
/// property tests.
#pragma once

#include "opcalc/grid.hpp"
#include "opcalc/spectral.hpp"

#include <cstdint>
#include <random>

namespace opcalc {

constexpr std::uint64_t DEFAULT_SEED = 0x4B4F4C4D;

class Rng {
public:
    explicit Rng(std::uint64_t seed = DEFAULT_SEED) : eng_(seed) {}

    double uniform(double a = 0.0, double b = 1.0) {
        return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

    Field real_field(const Grid& g) {
        Field f(g);
        for (auto& x : f.v) x = normal();
        return f;
    }
    Field complex_field(const Grid& g) {
        Field f(g);
        for (auto& x : f.v) {
            double re = normal();
            double im = normal();
            x = cplx(re, im);
        }
        return f;
    }
    // smooth random field: mollified white noise
    Field smooth_field(const Grid& g, double eps = 0.05) {
        return heat_mollify(real_field(g), eps);
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

} // namespace opcalc
