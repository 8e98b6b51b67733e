#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opcalc/constants.hpp"

using namespace opcalc;

TEST_CASE("named constants match their closed forms") {
    // m_d = pi^{1/2} (2e)^{-1/2} d^{d/2} (d-1)^{-(d-1)/2}
    CHECK(m_d(3) == doctest::Approx(std::sqrt(M_PI / (2.0 * std::exp(1.0))) *
                                    std::pow(3.0, 1.5) / 2.0)
                        .epsilon(1e-14));
    CHECK(m_d(3) == doctest::Approx(1.9750).epsilon(1e-4));
    CHECK(kappa_d(3) == doctest::Approx(1.5));
    CHECK(kappa_d(4) == doctest::Approx(4.0 / 3.0));
    // m_d^* at d = 3 collapses to pi/2
    CHECK(m_d_star(3) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
    // c_r = r r'/4 is 1 at r = 2 and symmetric under r <-> r'
    CHECK(c_r(2.0) == doctest::Approx(1.0));
    CHECK(c_r(3.0) == doctest::Approx(c_r(1.5)).epsilon(1e-14));
    // weak-class sqrt(delta) at d = 3: Gamma(1/2)/Gamma(1)/sqrt(2) = sqrt(pi/2)
    CHECK(weak_sqrt_delta(3) * weak_sqrt_delta(3) == doctest::Approx(M_PI / 2.0).epsilon(1e-13));
}

TEST_CASE("gamma identity across dimensions") {
    for (int d = 3; d <= 10; ++d) {
        double lhs = 0.5 * std::tgamma((d - 2) / 4.0) / std::tgamma((d + 2) / 4.0);
        CHECK(lhs == doctest::Approx(2.0 / (d - 2.0)).epsilon(1e-13));
    }
}

TEST_CASE("interval calculator basics") {
    IntervalReport r = intervals(1.0, 3);
    CHECK(r.r_delta == doctest::Approx(2.0));
    CHECK_FALSE(r.ic_empty);
    // I_s = ]r_-, r_+[ with r_-+ = 2/(1 +- sqrt(1 - m_d delta)); empty here since m_3 > 1
    CHECK(r.is_empty == (m_d(3) * 1.0 >= 1.0));
    // small delta: everything opens up
    IntervalReport s = intervals(0.01, 3);
    CHECK_FALSE(s.is_empty);
    CHECK(s.r_minus > 1.0);
    CHECK(s.r_minus < 2.0);
    CHECK(s.r_plus > 2.0);
    // r_- r_+ = 4 / (m_d delta) ... check the product identity r_- r_+ = 4/(1-(1-m_d delta)) = 4/(m_d delta)
    CHECK(s.r_minus * s.r_plus == doctest::Approx(4.0 / (m_d(3) * 0.01)).epsilon(1e-12));
    CHECK_THROWS_AS(intervals(-1.0, 3), std::domain_error);
    CHECK_THROWS_AS(intervals(1.0, 2), std::domain_error);
}

TEST_CASE("interval sweep properties") {
    for (int d : {3, 4, 5}) {
        double j = d / (d - 2.0);
        for (int i = 1; i <= 50; ++i) {
            double delta = 3.9 * i / 50.0;
            IntervalReport r = intervals(delta, d);
            double c = std::sqrt(delta) * (d - 2.0) / 2.0;
            double alpha = c - (d - 2.0);
            if (alpha < 0) {
                // r_delta * j = d/(-alpha) (Remark on the L^r threshold)
                CHECK(r.r_delta * j == doctest::Approx(d / (-alpha)).epsilon(1e-12));
            }
            if (!r.ic_empty) CHECK(r.r_delta >= r.im_left - 1e-14); // I_c subset I_m
        }
    }
}

TEST_CASE("omega_r and r_delta guards") {
    CHECK(omega_r(1.0, 2.0, 2.0) == doctest::Approx(1.0));
    CHECK(omega_r(1.0, 2.0, 3.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(omega_r(1.0, 1.0, 1.0), std::domain_error);
    CHECK(r_delta(1.0) == doctest::Approx(2.0));
    CHECK(r_delta(0.25) == doctest::Approx(2.0 / 1.5));
}

TEST_CASE("moser schedule identities") {
    IterationSchedule s = moser_schedule(3.0, 2.2, 3, 12);
    CHECK(s.t > 1.0);
    CHECK(s.gamma > 0.0);
    CHECK(s.gamma < 1.0);
    for (std::size_t n = 1; n <= s.r_seq.size(); ++n) {
        double rn = s.r_seq[n - 1];
        CHECK(s.alpha_seq[n - 1] ==
              doctest::Approx((std::pow(s.t, n) - 1.0) / ((s.t - 1.0) * rn)).epsilon(1e-13));
        CHECK(s.gamma_seq[n - 1] ==
              doctest::Approx(s.r0 * std::pow(s.t, n - 1) / (s.x_prime * rn)).epsilon(1e-13));
        CHECK(rn == doctest::Approx(moser_r_closed(s, static_cast<int>(n))).epsilon(1e-12));
        CHECK(s.gamma_seq[n - 1] > s.gamma - 1e-12);
        CHECK(s.gamma_seq[n - 1] < 1.0);
    }
    CHECK_THROWS_AS(moser_schedule(2.0, 2.2, 3), std::domain_error);
    CHECK_THROWS_AS(moser_schedule(3.0, 0.5, 3), std::domain_error);
}

TEST_CASE("sector bound sanity") {
    SectorBound sb = sector_bound(0.25, 2.0);
    CHECK(sb.tan_theta > 0.0);
    CHECK_THROWS_AS(sector_bound(0.25, 1.0), std::domain_error);
}
