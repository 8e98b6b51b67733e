#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opcalc/operators.hpp"

using namespace opcalc;

TEST_CASE("assemble_A with a = I is minus the Laplacian") {
    Grid g(3, 16, 8.0);
    Rng rng(1);
    Field f = rng.smooth_field(g, 0.05);
    DiscreteOperator A = assemble_A(make_matrix(IdentityMatrix{}), g);
    Field a = A(f);
    Field b = minus_laplacian(f);
    CHECK(norm2(a - b) < 1e-10 * std::max(norm2(b), 1.0));
}

TEST_CASE("divergence-form A is symmetric and nonnegative") {
    Grid g(3, 16, 8.0);
    Rng rng(2);
    DiscreteOperator A = assemble_A(make_matrix(RadialProjection{1.0}), g);
    Field f = rng.smooth_field(g, 0.05);
    Field h = rng.smooth_field(g, 0.05);
    cplx lhs = inner(h, A(f));
    cplx rhs = inner(A(h), f);
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
    CHECK(inner(f, A(f)).real() >= -1e-10);
}

TEST_CASE("accretivity functional of -Delta at r = 2 is the Dirichlet energy") {
    // band-limited probe (the spectral gradient zeroes the Nyquist mode)
    Grid g(3, 16, 8.0);
    Rng rng(3);
    Field f = heat_mollify(rng.smooth_field(g, 0.05), 2.0);
    cplx q = accretivity_functional([](const Field& u) { return minus_laplacian(u); }, 2.0, f);
    VectorField gf = gradient(f);
    double energy = 0;
    for (int ax = 0; ax < 3; ++ax) {
        double n = norm2(gf[ax]);
        energy += n * n;
    }
    CHECK(q.real() == doctest::Approx(energy).epsilon(1e-8));
    CHECK(std::abs(q.imag()) < 1e-8 * energy);
}

TEST_CASE("power_sign has the right magnitude and phase") {
    Grid g(3, 8, 8.0);
    Field f(g);
    f[0] = cplx(3.0, 4.0); // |f| = 5
    Field p = power_sign(f, 2.0);
    CHECK(std::abs(p[0]) == doctest::Approx(25.0));
    CHECK(std::arg(p[0]) == doctest::Approx(std::arg(f[0])));
    CHECK(power_sign(Field(g), 2.0)[0] == cplx(0.0));
}

TEST_CASE("generator with zero drift reduces to A") {
    Grid g(3, 16, 8.0);
    Rng rng(4);
    Field f = rng.smooth_field(g, 0.05);
    Generator gen = make_generator(make_matrix(IdentityMatrix{}), ZeroDrift{}, g);
    CHECK_FALSE(gen.has_drift);
    Field a = gen(f);
    Field b = minus_laplacian(f);
    CHECK(norm2(a - b) < 1e-10 * std::max(norm2(b), 1.0));
}

TEST_CASE("drift term is first-order: annihilates constants") {
    Grid g(3, 16, 8.0);
    Field one(g);
    for (std::size_t i = 0; i < one.size(); ++i) one[i] = 1.0;
    Generator gen = make_generator(make_matrix(IdentityMatrix{}), MollifiedHardy{0.5, +1, 0.5}, g);
    Field lu = gen(one);
    CHECK(norm2(lu) < 1e-10);
}

TEST_CASE("phillips and stampacchia conditions hold for -Delta") {
    Grid g(3, 16, 8.0);
    Rng rng(5);
    auto [ph, st] = phillips_stampacchia_check(
        [](const Field& u) { return minus_laplacian(u); }, g, 4, rng);
    CHECK(ph >= -1e-8);
    CHECK(st >= -1e-8);
}

TEST_CASE("L^r accretivity inequalities for A = -Delta") {
    // (4/rr')||A^{1/2} f_(r)||^2 <= Re <Af, f|f|^{r-2}> <= vk(r) ||A^{1/2} f_(r)||^2
    Grid g(3, 16, 8.0);
    Rng rng(6);
    double r = 3.0;
    double vk = 1.0 + std::abs(r - 2.0) / (2.0 * std::sqrt(r - 1.0)) +
                std::pow(r - 2.0, 2.0) / (4.0 * (r - 1.0)); // generous ceiling
    LrInequalityResult res = lr_inequality_check(
        [](const Field& u) { return minus_laplacian(u); },
        [](const Field& u) {
            return apply_multiplier_k2(u, [](double k2) -> cplx { return std::sqrt(k2); });
        },
        r, vk, g, 4, rng);
    CHECK(res.min_lower_margin >= -1e-6);
    CHECK(res.min_im_margin >= -1e-6);
}
