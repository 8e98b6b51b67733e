/// Closed-form calculator for every named constant and interval of the
/// operator theory: contraction / solvability intervals, sector bounds,
/// dimensional kernel constants, the L^r inequality constant varkappa(r),
/// the Moser iteration schedule, and the two-norm extrapolation helper.
#pragma once

#include "opcalc/numerics.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace opcalc {

constexpr double INF = std::numeric_limits<double>::infinity();

// m_d = pi^{1/2} (2e)^{-1/2} d^{d/2} (d-1)^{-(d-1)/2}
inline double m_d(int d) {
    return std::sqrt(M_PI) / std::sqrt(2.0 * M_E) * std::pow(d, d / 2.0) /
           std::pow(d - 1.0, (d - 1.0) / 2.0);
}

// kappa_d = d/(d-1)
inline double kappa_d(int d) { return d / (d - 1.0); }

// c_r = r r' / 4
inline double c_r(double r) {
    if (r <= 1) throw std::domain_error("c_r: r must be > 1");
    double rp = r / (r - 1.0);
    return r * rp / 4.0;
}

// m_d^* = ((d-2)/2) sqrt(pi) Gamma((d-2)/2) / Gamma((d-1)/2)
inline double m_d_star(int d) {
    return (d - 2.0) / 2.0 * std::sqrt(M_PI) * std::tgamma((d - 2.0) / 2.0) /
           std::tgamma((d - 1.0) / 2.0);
}

// r_delta = 2/(2 - sqrt(delta)), the left endpoint of I_c
inline double r_delta(double delta) {
    double sd = std::sqrt(delta);
    if (sd >= 2.0) return INF; // I_c empty
    return 2.0 / (2.0 - sd);
}

// quasi-contractivity growth bound omega_r = lambda*delta/(2(r-1))
inline double omega_r(double delta, double lambda, double r) {
    if (r <= 1) throw std::domain_error("omega_r: r must be > 1");
    return lambda * delta / (2.0 * (r - 1.0));
}

// Gamma quotient of Example ex0.2: (1/2) Gamma((d-2)/4)/Gamma((d+2)/4) == 2/(d-2)
inline double hardy_gamma_quotient(int d) {
    return 0.5 * std::tgamma((d - 2.0) / 4.0) / std::tgamma((d + 2.0) / 4.0);
}

// sqrt(delta) of the weak-class golden value: 2^{-1/2} Gamma((d-1)/4)/Gamma((d+1)/4)
inline double weak_sqrt_delta(int d) {
    return std::tgamma((d - 1.0) / 4.0) / std::tgamma((d + 1.0) / 4.0) / std::sqrt(2.0);
}

struct IntervalReport {
    double delta = 0;
    int d = 3;
    double r_delta = 0;      // left endpoint of I_c (inf if empty)
    bool ic_empty = false;
    double im_left = 0;      // left endpoint of I_m (open)
    bool is_empty = false;   // I_s = ]r_-, r_+[ empty iff m_d*delta >= 1
    double r_minus = 0, r_plus = 0;
    double m_d = 0, kappa_d = 0, m_d_star = 0;
};

inline IntervalReport intervals(double delta, int d) {
    if (delta <= 0 || d < 3) throw std::domain_error("intervals: need delta > 0, d >= 3");
    IntervalReport rep;
    rep.delta = delta;
    rep.d = d;
    double sd = std::sqrt(delta);
    rep.ic_empty = sd >= 2.0;
    rep.r_delta = r_delta(delta);
    rep.im_left = 2.0 / (2.0 - (d - 2.0) / d * sd);
    rep.m_d = m_d(d);
    rep.kappa_d = kappa_d(d);
    rep.m_d_star = m_d_star(d);
    double md = rep.m_d * delta;
    rep.is_empty = md >= 1.0;
    if (!rep.is_empty) {
        double root = std::sqrt(1.0 - md);
        rep.r_minus = 2.0 / (1.0 + root);
        rep.r_plus = 2.0 / (1.0 - root);
    }
    return rep;
}

// sector bound of (****): K and the tan(theta_r) ceiling K/(2 - r' sqrt(delta))
struct SectorBound {
    double K = 0;
    double tan_theta = 0;
};

inline SectorBound sector_bound(double delta, double r) {
    double sd = std::sqrt(delta);
    if (r <= 1) throw std::domain_error("sector_bound: r must be > 1");
    double rp = r / (r - 1.0);
    if (2.0 - rp * sd <= 0)
        throw std::domain_error("sector_bound: r outside the interior of I_c");
    SectorBound sb;
    double rd = r_delta(delta);
    if (r <= 2.0 * rd)
        sb.K = std::abs(r - 2.0) / std::sqrt(r - 1.0) + rp * sd;
    else
        sb.K = (r - 2.0 + r * sd) / std::sqrt(r - 1.0);
    sb.tan_theta = sb.K / (2.0 - rp * sd);
    return sb;
}

// varkappa(r) = sup_{s in [0,1]} (1+s^{1/r})(1+s^{1/r'})(1+s^{1/2})^{-2}
inline double varkappa(double r) {
    if (r <= 1) throw std::domain_error("varkappa: r must be > 1");
    double rp = r / (r - 1.0);
    auto f = [&](double s) {
        return (1.0 + std::pow(s, 1.0 / r)) * (1.0 + std::pow(s, 1.0 / rp)) /
               std::pow(1.0 + std::sqrt(s), 2.0);
    };
    double best = std::max(f(0.0), f(1.0));
    auto [s, v] = golden_max(f, 0.0, 1.0, 1e-12);
    (void)s;
    return std::max(best, v);
}

// Coulhon-Raynaud extrapolation: beta = (r/q)(q-p)/(r-p), M = 2^{nu/(1-beta)^2} M1 M2^{1/(1-beta)}
struct Extrapolation {
    double beta = 0;
    double M = 0;
};

inline Extrapolation extrapolate(double M1, double M2, double nu, double p, double q, double r) {
    if (!(1.0 <= p && p < q && q < r)) throw std::domain_error("extrapolate: need 1 <= p < q < r");
    Extrapolation e;
    e.beta = std::isinf(r) ? (q - p) / q : (r / q) * (q - p) / (r - p);
    e.M = std::pow(2.0, nu / ((1.0 - e.beta) * (1.0 - e.beta))) * M1 *
          std::pow(M2, 1.0 / (1.0 - e.beta));
    return e;
}

// q^{-/+} of the G-condition corollary: (2 - sqrt(delta) -/+ sqrt((2-sqrt(delta))^2 - 4 delta_1))/delta_1
struct QPair {
    bool applicable = false;
    double q_minus = 0, q_plus = 0;
};

inline QPair g_condition_q(double delta, double delta1) {
    QPair out;
    double a = 2.0 - std::sqrt(delta);
    double disc = a * a - 4.0 * delta1;
    if (disc < 0 || delta1 <= 0) return out;
    out.applicable = true;
    out.q_minus = (a - std::sqrt(disc)) / delta1;
    out.q_plus = (a + std::sqrt(disc)) / delta1;
    return out;
}

// prop_incl sum rule: sqrt(delta) = delta_1^{1/4} + sqrt(delta_2)
inline double inclusion_sum_sqrt_delta(double delta1, double delta2) {
    return std::pow(delta1, 0.25) + std::sqrt(delta2);
}

// ---- Moser iteration schedule (Lemma 2) -------------------------------------
// r_{n+1} = t r_n + 2 with x'(r_1 - 2) = r_0, t = j/x' > 1, 2x = qj,
// j = d/(d-2), x' = x/(x-1).
struct IterationSchedule {
    double r0 = 0, q = 0;
    int d = 3;
    double j = 0, x = 0, x_prime = 0, t = 0;
    std::vector<double> r_seq;
    std::vector<double> gamma_seq; // gamma_n = r0 t^{n-1} / (x' r_n)
    std::vector<double> alpha_seq; // alpha_n = (t^n - 1)/((t-1) r_n)
    double gamma = 0;              // limit (1 - x'/j)(1 - x'/j + 2x'/r0)^{-1}
};

inline IterationSchedule moser_schedule(double r0, double q, int d, int terms = 24) {
    IterationSchedule s;
    s.r0 = r0; s.q = q; s.d = d;
    s.j = d / (d - 2.0);
    s.x = q * s.j / 2.0;
    if (s.x <= 1.0) throw std::domain_error("moser_schedule: q*j/2 must exceed 1");
    s.x_prime = s.x / (s.x - 1.0);
    s.t = s.j / s.x_prime;
    if (s.t <= 1.0) throw std::domain_error("moser_schedule: t = j/x' must exceed 1");
    if (r0 <= 2.0) throw std::domain_error("moser_schedule: r0 must exceed 2");
    double r = r0 / s.x_prime + 2.0; // r_1 from x'(r_1 - 2) = r_0
    for (int n = 1; n <= terms; ++n) {
        s.r_seq.push_back(r);
        s.gamma_seq.push_back(r0 * std::pow(s.t, n - 1) / (s.x_prime * r));
        s.alpha_seq.push_back((std::pow(s.t, n) - 1.0) / ((s.t - 1.0) * r));
        r = s.t * r + 2.0;
    }
    s.gamma = (1.0 - s.x_prime / s.j) / (1.0 - s.x_prime / s.j + 2.0 * s.x_prime / r0);
    return s;
}

// closed form r_n = (t-1)^{-1} (t^n (r0/x' + 2) - t^{n-1} r0/x' - 2)
inline double moser_r_closed(const IterationSchedule& s, int n) {
    double tn = std::pow(s.t, n);
    return (tn * (s.r0 / s.x_prime + 2.0) - tn / s.t * s.r0 / s.x_prime - 2.0) / (s.t - 1.0);
}

} // namespace opcalc
