#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opcalc/formbound.hpp"

using namespace opcalc;

TEST_CASE("zero drift has form bound zero") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(ZeroDrift{}, g);
    CHECK(estimate_delta_strong(b, make_matrix(IdentityMatrix{}), 1.0, g).delta_hat ==
          doctest::Approx(0.0));
    CHECK(estimate_delta_weak(b, 1.0, g).delta_hat == doctest::Approx(0.0));
    CHECK(kato_norm(b, 1.0, g).delta_hat == doctest::Approx(0.0));
}

TEST_CASE("strong form bound is quadratic in the drift amplitude") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(MollifiedHardy{0.3, +1, 0.5}, g);
    VectorField b2 = b;
    for (int ax = 0; ax < 3; ++ax) b2[ax] *= 2.0;
    double d1 = estimate_delta_strong(b, make_matrix(IdentityMatrix{}), 1.0, g).delta_hat;
    double d2 = estimate_delta_strong(b2, make_matrix(IdentityMatrix{}), 1.0, g).delta_hat;
    CHECK(d2 == doctest::Approx(4.0 * d1).epsilon(1e-6));
}

TEST_CASE("weak form bound is linear in the drift amplitude") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(MollifiedHardy{0.3, +1, 0.5}, g);
    VectorField b2 = b;
    for (int ax = 0; ax < 3; ++ax) b2[ax] *= 2.0;
    double d1 = estimate_delta_weak(b, 1.0, g).delta_hat;
    double d2 = estimate_delta_weak(b2, 1.0, g).delta_hat;
    CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-6));
}

TEST_CASE("delta_hat decreases in lambda for the strong class") {
    // K_lambda = J M J shrinks as lambda grows (monotone multiplier)
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(HardyDrift{0.4, +1}, g);
    MatrixSpec id = make_matrix(IdentityMatrix{});
    double d_small = estimate_delta_strong(b, id, 1e-2, g).delta_hat;
    double d_large = estimate_delta_strong(b, id, 1.0, g).delta_hat;
    CHECK(d_large <= d_small + 1e-10);
}

TEST_CASE("bounded drift: strong delta_hat <= sup|b|^2 / lambda") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(TruncatedHardy{0.5, +1, 1.0}, g);
    double lambda = 2.0;
    double dh = estimate_delta_strong(b, make_matrix(IdentityMatrix{}), lambda, g).delta_hat;
    // ||J M_{b^2} J|| <= ||b||_inf^2 ||(lambda+A)^{-1}|| <= 1/lambda here (|b| <= 1)
    CHECK(dh <= 1.0 / lambda + 1e-8);
}

TEST_CASE("matrix route agrees with the multiplier route for a = I profile") {
    // the generalized eigenproblem path (non-identity a) must reproduce the
    // multiplier path when the matrix is a = I + 0 * projection
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(MollifiedHardy{0.4, +1, 0.5}, g);
    double d_mult =
        estimate_delta_strong(b, make_matrix(IdentityMatrix{}), 0.5, g).delta_hat;
    double d_matrix =
        estimate_delta_strong(b, make_matrix(RadialProjection{0.0}), 0.5, g).delta_hat;
    CHECK(d_matrix == doctest::Approx(d_mult).epsilon(0.05));
}

TEST_CASE("kato norm dominates: slab drift is Kato but not weak-small") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(SlabDrift{0.75}, g);
    FormBoundReport kato = kato_norm(b, 4.0, g);
    CHECK(kato.delta_hat > 0.0);
    CHECK(std::isfinite(kato.delta_hat));
    // kato norm shrinks with lambda
    CHECK(kato_norm(b, 16.0, g).delta_hat < kato.delta_hat);
}

TEST_CASE("guards") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(ZeroDrift{}, g);
    CHECK_THROWS_AS(estimate_delta_weak(b, 0.0, g), std::domain_error);
    CHECK_THROWS_AS(kato_norm(b, -1.0, g), std::domain_error);
}

TEST_CASE("power iteration reports convergence metadata") {
    Grid g(3, 16, 8.0);
    VectorField b = sample_drift(MollifiedHardy{0.3, +1, 0.5}, g);
    FormBoundReport rep = estimate_delta_weak(b, 1.0, g);
    CHECK(rep.iterations > 0);
    CHECK(rep.residual < 1e-6);
    CHECK(rep.class_kind == "weak_half");
    CHECK(rep.grid_tag.find("16^3") == 0);
}
