#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opcalc/drift.hpp"

using namespace opcalc;

TEST_CASE("hardy drift has magnitude c/r away from the cap") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(HardyDrift{0.5, +1}, g);
    Field mag = b.magnitude();
    std::array<double, 4> x{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.radius(i);
        if (r < 2.0 * g.h()) continue; // capped near the singularity
        CHECK(std::abs(mag[i].real() - 0.5 / r) < 1e-12);
        // direction is radial: b . x = |b| r
        g.node(i, x);
        double dot = 0;
        for (int ax = 0; ax < 3; ++ax) dot += b[ax][i].real() * x[ax];
        CHECK(dot == doctest::Approx(mag[i].real() * r).epsilon(1e-10));
    }
}

TEST_CASE("attractive sign flips the field") {
    Grid g(3, 16, 8.0);
    VectorField bp = sample_drift(HardyDrift{0.5, +1}, g);
    VectorField bm = sample_drift(HardyDrift{0.5, -1}, g);
    for (int ax = 0; ax < 3; ++ax)
        for (std::size_t i = 0; i < g.size(); i += 97)
            CHECK(bp[ax][i] == -bm[ax][i]);
}

TEST_CASE("truncated hardy zeroes the field where |b| > n") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(TruncatedHardy{0.5, +1, 0.25}, g);
    Field mag = b.magnitude();
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(mag[i].real() <= 0.25 + 1e-12);
    // far from the origin it matches the untruncated field (|b| = c/r <= n there)
    VectorField full = sample_drift(HardyDrift{0.5, +1}, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.radius(i) > 0.5 / 0.25 + g.h())
            for (int ax = 0; ax < 3; ++ax) CHECK(b[ax][i] == full[ax][i]);
}

TEST_CASE("mollified hardy is bounded and converges to hardy as eps -> 0") {
    Grid g(3, 16, 8.0);
    VectorField b1 = sample_drift(MollifiedHardy{0.5, +1, 0.5}, g);
    VectorField b2 = sample_drift(MollifiedHardy{0.5, +1, 0.05}, g);
    VectorField bh = sample_drift(HardyDrift{0.5, +1}, g);
    double d1 = 0, d2 = 0;
    for (int ax = 0; ax < 3; ++ax) {
        d1 += norm2(b1[ax] - bh[ax]);
        d2 += norm2(b2[ax] - bh[ax]);
    }
    CHECK(d2 < d1); // smaller eps is closer
}

TEST_CASE("radial projection matrix: eigenvalues 1 and 1 + c") {
    Grid g(3, 16, 8.0);
    MatrixSpec a = make_matrix(RadialProjection{1.5});
    std::array<double, 4> x{1.0, 2.0, -0.5, 0.0};
    double mat[16];
    matrix_at(a, x, 3, mat);
    // a x = (1 + c) x on the radial direction
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    for (int i = 0; i < 3; ++i) {
        double axi = 0;
        for (int j = 0; j < 3; ++j) axi += mat[i * 3 + j] * x[j];
        CHECK(axi == doctest::Approx(2.5 * x[i]).epsilon(1e-12));
    }
    // tangential vector stays fixed: t = (x1, -x0, 0) is orthogonal to x
    double t[3] = {x[1], -x[0], 0.0};
    for (int i = 0; i < 3; ++i) {
        double ati = 0;
        for (int j = 0; j < 3; ++j) ati += mat[i * 3 + j] * t[j];
        CHECK(ati == doctest::Approx(t[i]).epsilon(1e-12));
    }
    (void)r2;
}

TEST_CASE("b_a field reduces to |b| for a = I") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(HardyDrift{0.5, +1}, g);
    Field ba = b_a_field(b, make_matrix(IdentityMatrix{}));
    Field mag = b.magnitude();
    CHECK(norm2(ba - mag) < 1e-12 * std::max(norm2(mag), 1.0));
}

TEST_CASE("matrix sigma (uniform ellipticity floor)") {
    CHECK(matrix_sigma(make_matrix(IdentityMatrix{})) == doctest::Approx(1.0));
    CHECK(matrix_sigma(make_matrix(RadialProjection{2.0})) == doctest::Approx(1.0));
}

TEST_CASE("zero drift samples to zero") {
    Grid g(3, 8, 8.0);
    VectorField b = sample_drift(ZeroDrift{}, g);
    for (int ax = 0; ax < 3; ++ax) CHECK(norm2(b[ax]) == 0.0);
}

TEST_CASE("origin offset is required for singular drifts") {
    Grid g(3, 16, 8.0, false);
    CHECK_THROWS_AS(sample_drift(HardyDrift{0.5, +1}, g), std::invalid_argument);
}
