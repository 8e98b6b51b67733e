/// One-dimensional radial reductions: the two-solution Dirichlet example,
/// the sharp Hardy constant for a = I + c|x|^{-2} x (x) x by a Rayleigh
/// minimization, the dilation inequality, and the I_m counterexample.
#pragma once

#include "opcalc/numerics.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opcalc {

struct RadialGrid {
    double rho_min = 1e-4;
    double rho_max = 1.0;
    int points = 4096;
    bool log_spacing = true;
    std::vector<double> rho;

    RadialGrid(double rmin, double rmax, int n, bool log_spaced = true)
        : rho_min(rmin), rho_max(rmax), points(n), log_spacing(log_spaced) {
        if (!(rho_min > 0) || !(rho_min < rho_max))
            throw std::invalid_argument("RadialGrid: need 0 < rho_min < rho_max");
        if (points < 64) throw std::invalid_argument("RadialGrid: points must be >= 64");
        rho.resize(points);
        for (int i = 0; i < points; ++i) {
            double s = static_cast<double>(i) / (points - 1);
            rho[i] = log_spacing ? rho_min * std::pow(rho_max / rho_min, s)
                                 : rho_min + (rho_max - rho_min) * s;
        }
    }
};

using RadialProfile = std::vector<double>;

enum class RadialCase { drift, matrix, matrix_divergence, adjoint_drift };

// power-law root rho^alpha of the homogeneous radial equation
inline double radial_alpha(RadialCase which, double c, int d) {
    switch (which) {
        case RadialCase::drift: return c - (d - 2);
        case RadialCase::matrix: return 1.0 - (d - 1.0) / (1.0 + c);
        default: throw std::invalid_argument("radial_alpha: drift or matrix case only");
    }
}

// second-order nonuniform stencil for u' and u'' at interior nodes
namespace detail {
struct StencilDeriv {
    double u1 = 0, u2 = 0; // first and second derivative at node i
};
inline StencilDeriv derivs(const RadialGrid& g, const RadialProfile& u, int i) {
    double hl = g.rho[i] - g.rho[i - 1], hr = g.rho[i + 1] - g.rho[i];
    StencilDeriv out;
    out.u1 = (-hr / (hl * (hl + hr))) * u[i - 1] +
             ((hr - hl) / (hl * hr)) * u[i] +
             (hl / (hr * (hl + hr))) * u[i + 1];
    out.u2 = 2.0 / (hl * (hl + hr)) * u[i - 1] - 2.0 / (hl * hr) * u[i] +
             2.0 / (hr * (hl + hr)) * u[i + 1];
    return out;
}
} // namespace detail

// radial generator at interior nodes; boundary entries are left as zero
//   drift:             L u = -u'' - ((d-1)/rho) u' + (c/rho) u'
//   matrix (-a.grad^2): L u = -(1+c) u'' - ((d-1)/rho) u'
//   matrix divergence:  L u = -(1+c) u'' - ((1+c)(d-1)/rho) u'
//     (-div a grad on radial profiles; kept distinct from the paper's -a.grad^2)
//   adjoint drift:      L u = -u'' - ((d-1)/rho) u' - (c/rho) u' - c(d-2) rho^{-2} u
inline RadialProfile radial_apply(RadialCase which, double c, int d, const RadialGrid& g,
                                  const RadialProfile& u) {
    if (d < 3) throw std::invalid_argument("radial_apply: d must be >= 3");
    RadialProfile out(g.points, 0.0);
    for (int i = 1; i + 1 < g.points; ++i) {
        auto [u1, u2] = detail::derivs(g, u, i);
        double rho = g.rho[i];
        switch (which) {
            case RadialCase::drift:
                out[i] = -u2 - ((d - 1.0) / rho) * u1 + (c / rho) * u1;
                break;
            case RadialCase::matrix:
                out[i] = -(1.0 + c) * u2 - ((d - 1.0) / rho) * u1;
                break;
            case RadialCase::matrix_divergence:
                out[i] = -(1.0 + c) * u2 - ((1.0 + c) * (d - 1.0) / rho) * u1;
                break;
            case RadialCase::adjoint_drift:
                out[i] = -u2 - ((d - 1.0) / rho) * u1 - (c / rho) * u1 -
                         c * (d - 2.0) / (rho * rho) * u[i];
                break;
        }
    }
    return out;
}

struct TwoSolutionsReport {
    double alpha = 0;
    double delta = 0;              // 4 c^2 / (d-2)^2
    double residual_u2 = 0;        // max interior |L u2| (u1 = 0 is exact)
    bool unbounded_at_origin = false;
    bool max_principle_violated = false;
    double lr_threshold = 0;       // u2 in L^r iff r < d / (-alpha) (alpha < 0)
    std::vector<double> lr_probe_r;
    std::vector<bool> lr_member;
};

// L^r membership of rho^alpha - 1 near the origin by quadrature under
// rho_min halving: convergent iff the increments decay geometrically
inline bool lr_membership_by_quadrature(double alpha, int d, double r) {
    double prev_increment = 0;
    double total = 0, rho_hi = 1.0;
    std::vector<double> ratios;
    for (int level = 0; level < 12; ++level) {
        double rho_lo = rho_hi / 2.0;
        double inc = adaptive_simpson(
            [&](double rho) {
                return std::pow(std::abs(std::pow(rho, alpha) - 1.0), r) *
                       std::pow(rho, d - 1.0);
            },
            rho_lo, rho_hi, 1e-12);
        total += inc;
        if (level > 2 && prev_increment > 0) ratios.push_back(inc / prev_increment);
        prev_increment = inc;
        rho_hi = rho_lo;
    }
    // geometric decay of dyadic shell contributions <=> integrability at 0
    double tail_ratio = ratios.empty() ? 0.0 : ratios.back();
    (void)total;
    return tail_ratio < 0.999;
}

inline TwoSolutionsReport dirichlet_two_solutions(double c, int d, RadialCase which,
                                                  const RadialGrid& g) {
    TwoSolutionsReport rep;
    rep.alpha = radial_alpha(which, c, d);
    rep.delta = 4.0 * c * c / ((d - 2.0) * (d - 2.0));
    if (std::abs(rep.alpha) < 1e-12)
        throw std::domain_error("dirichlet_two_solutions: degenerate case alpha = 0");
    RadialProfile u2(g.points);
    for (int i = 0; i < g.points; ++i) u2[i] = std::pow(g.rho[i], rep.alpha) - 1.0;
    RadialProfile Lu = radial_apply(which, c, d, g, u2);
    // backward-error residual: |L u2| relative to the magnitude of the
    // operator's constituent terms at the node (the raw residual scales like
    // rho^{alpha-2} near the singular origin and is not a meaningful target)
    for (int i = 1; i + 1 < g.points; ++i) {
        double rho = g.rho[i];
        double term = (std::abs(rep.alpha * (rep.alpha - 1)) +
                       (d - 1.0 + std::abs(c)) * std::abs(rep.alpha)) *
                      std::pow(rho, rep.alpha - 2.0);
        rep.residual_u2 = std::max(rep.residual_u2, std::abs(Lu[i]) / std::max(term, 1e-30));
    }
    rep.unbounded_at_origin = rep.alpha < 0;
    if (rep.alpha > 0) {
        // alpha > 0: u2 extends continuously to the origin (u2(0) = -1), so the
        // only physical boundary of the ball is rho = 1 where u2 = 0; any interior
        // value strictly below the boundary value violates the minimum principle
        double boundary_value = u2.back();
        for (int i = 0; i + 1 < g.points; ++i)
            if (u2[i] < boundary_value - 1e-6) rep.max_principle_violated = true;
    }
    if (rep.alpha < 0) {
        rep.lr_threshold = d / (-rep.alpha);
        for (double r : {rep.lr_threshold - 0.5, rep.lr_threshold + 0.5}) {
            rep.lr_probe_r.push_back(r);
            rep.lr_member.push_back(lr_membership_by_quadrature(rep.alpha, d, r));
        }
    }
    return rep;
}

namespace detail {
// Thomas solve for a tridiagonal system (diag a, sub l, super u)
inline std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag,
                                  std::vector<double> sup, std::vector<double> rhs) {
    int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}
} // namespace detail

// sharp Hardy constant for a = I + c|x|^{-2} x (x) x:
//   inf <grad h . a . grad h> / || |x|^{-1} h ||_2^2 = (c+1)(d-2)^2/4
// realized as a P1 finite-element generalized eigenproblem on a log grid;
// stiffness K = (1+c) int h'^2 rho^{d-1}, mass M = int h^2 rho^{d-3}
inline double hardy_constant_rayleigh(double c, int d, const RadialGrid& g,
                                      int max_iter = 200, double tol = 1e-10) {
    if (c <= -1) throw std::domain_error("hardy_constant_rayleigh: need c > -1");
    int n = g.points;
    std::vector<double> Kd(n, 0.0), Ks(n, 0.0);           // stiffness diag / super
    std::vector<double> Md(n, 0.0), Ms(n, 0.0);           // mass diag / super
    for (int e = 0; e + 1 < n; ++e) {
        double a = g.rho[e], b = g.rho[e + 1], h = b - a;
        // exact int_a^b rho^{d-1} d rho for the constant-slope stiffness term
        double w_stiff = (std::pow(b, d) - std::pow(a, d)) / d;
        double k = (1.0 + c) * w_stiff / (h * h);
        Kd[e] += k; Kd[e + 1] += k; Ks[e] -= k;
        // 3-point Gauss-Legendre for the rho^{d-3}-weighted hat products
        static const double gp[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
        static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        for (int q = 0; q < 3; ++q) {
            double rho = 0.5 * (a + b) + 0.5 * h * gp[q];
            double w = 0.5 * h * gw[q] * std::pow(rho, d - 3.0);
            double pl = (b - rho) / h, pr = (rho - a) / h;
            Md[e] += w * pl * pl;
            Md[e + 1] += w * pr * pr;
            Ms[e] += w * pl * pr;
        }
    }
    // homogeneous Dirichlet at both ends: drop the first and last nodes
    int m = n - 2;
    std::vector<double> kd(m), ks(m), ksub(m), md(m), ms(m), msub(m);
    for (int i = 0; i < m; ++i) {
        kd[i] = Kd[i + 1]; md[i] = Md[i + 1];
        ks[i] = i + 1 < m ? Ks[i + 1] : 0.0;
        ms[i] = i + 1 < m ? Ms[i + 1] : 0.0;
        ksub[i] = i > 0 ? Ks[i] : 0.0;
        msub[i] = i > 0 ? Ms[i] : 0.0;
    }
    auto mat_apply = [&](const std::vector<double>& diag, const std::vector<double>& sup,
                         const std::vector<double>& sub, const std::vector<double>& v) {
        std::vector<double> out(m, 0.0);
        for (int i = 0; i < m; ++i) {
            out[i] = diag[i] * v[i];
            if (i + 1 < m) out[i] += sup[i] * v[i + 1];
            if (i > 0) out[i] += sub[i] * v[i - 1];
        }
        return out;
    };
    // inverse power iteration on K x = mu M x
    std::vector<double> v(m, 1.0);
    double mu = 0, mu_old = INFINITY;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> rhs = mat_apply(md, ms, msub, v);
        v = detail::thomas(ksub, kd, ks, rhs);
        double nv = 0;
        for (double x : v) nv += x * x;
        nv = std::sqrt(nv);
        for (double& x : v) x /= nv;
        std::vector<double> Kv = mat_apply(kd, ks, ksub, v);
        std::vector<double> Mv = mat_apply(md, ms, msub, v);
        double num = 0, den = 0;
        for (int i = 0; i < m; ++i) { num += v[i] * Kv[i]; den += v[i] * Mv[i]; }
        mu = num / den;
        if (std::abs(mu - mu_old) <= tol * std::abs(mu)) break;
        mu_old = mu;
    }
    return mu;
}

struct DilationCheck {
    double min_ratio = INFINITY;             // over the sample family
    double near_extremal_ratio = 0;          // rho^{-d/2+eps} cutoff family
    double scale_invariance_defect = 0;      // |ratio(f) - ratio(f(s.))|
};

// ||x . grad f||_2 / ||f||_2 >= d/2 with sharp constant; radial quadrature
inline double dilation_ratio(const std::function<double(double)>& f,
                             const std::function<double(double)>& fprime, int d,
                             double rho_min, double rho_max) {
    // composite over a log-spaced partition: a single adaptive pass on the
    // whole interval can terminate early when its initial samples all land
    // outside the support of a localized profile
    auto integrate = [&](const std::function<double(double)>& g) {
        const int segments = 64;
        double s0 = std::log(rho_min), s1 = std::log(rho_max);
        double total = 0;
        for (int k = 0; k < segments; ++k) {
            double a = std::exp(s0 + (s1 - s0) * k / segments);
            double b = std::exp(s0 + (s1 - s0) * (k + 1) / segments);
            total += adaptive_simpson(g, a, b, 1e-13);
        }
        return total;
    };
    double num = integrate([&](double rho) {
        double v = rho * fprime(rho);
        return v * v * std::pow(rho, d - 1.0);
    });
    double den = integrate(
        [&](double rho) { return f(rho) * f(rho) * std::pow(rho, d - 1.0); });
    return std::sqrt(num / den);
}

inline DilationCheck dilation_inequality_check(int d, double eps_near = 0.05) {
    DilationCheck out;
    // sample family: Gaussians of several widths and a compact bump
    for (double w : {0.5, 1.0, 2.0}) {
        auto f = [w](double r) { return std::exp(-r * r / (2 * w * w)); };
        auto fp = [w](double r) { return -r / (w * w) * std::exp(-r * r / (2 * w * w)); };
        out.min_ratio = std::min(out.min_ratio, dilation_ratio(f, fp, d, 1e-8, 40.0 * w));
    }
    {
        auto f = [](double r) { return r < 1.0 ? std::pow(1.0 - r * r, 2.0) : 0.0; };
        auto fp = [](double r) { return r < 1.0 ? -4.0 * r * (1.0 - r * r) : 0.0; };
        out.min_ratio = std::min(out.min_ratio, dilation_ratio(f, fp, d, 1e-8, 1.0));
    }
    // scale invariance: the Gaussian at two scales
    {
        auto f1 = [](double r) { return std::exp(-r * r / 2); };
        auto fp1 = [](double r) { return -r * std::exp(-r * r / 2); };
        auto f2 = [](double r) { return std::exp(-9 * r * r / 2); };
        auto fp2 = [](double r) { return -9 * r * std::exp(-9 * r * r / 2); };
        out.scale_invariance_defect = std::abs(dilation_ratio(f1, fp1, d, 1e-8, 40.0) -
                                               dilation_ratio(f2, fp2, d, 1e-8, 14.0));
    }
    // near-extremal: rho^{-d/2+eps} with smooth outer cutoff e^{-rho^2}
    {
        double p = -d / 2.0 + eps_near;
        auto f = [p](double r) { return std::pow(r, p) * std::exp(-r * r); };
        auto fp = [p](double r) {
            return (p / r - 2.0 * r) * std::pow(r, p) * std::exp(-r * r);
        };
        out.near_extremal_ratio = dilation_ratio(f, fp, d, 1e-10, 30.0);
    }
    return out;
}

struct ImCounterexample {
    double residual = 0;                 // radial residual of (lambda + L*) u = f
    double threshold = 0;                // u in L^p iff p < d/c
    std::vector<double> p_list;
    std::vector<bool> member;            // quadrature verdict per p
};

// u = |x|^{-c} e^{-|x|^2} satisfies (lambda + Lambda*) u = [lambda + 2(d-c)] u - 4 |x|^2 u
inline ImCounterexample im_counterexample(double c, int d, double lambda,
                                          const std::vector<double>& p_list,
                                          const RadialGrid& g) {
    if (!(c > 0 && c < d)) throw std::domain_error("im_counterexample: need 0 < c < d");
    ImCounterexample out;
    out.threshold = d / c;
    RadialProfile u(g.points);
    for (int i = 0; i < g.points; ++i)
        u[i] = std::pow(g.rho[i], -c) * std::exp(-g.rho[i] * g.rho[i]);
    RadialProfile Lu = radial_apply(RadialCase::adjoint_drift, c, d, g, u);
    for (int i = 1; i + 1 < g.points; ++i) {
        double rho = g.rho[i];
        double f = (lambda + 2.0 * (d - c)) * u[i] - 4.0 * rho * rho * u[i];
        // backward error: normalize by the magnitude of the constituent terms,
        // not by |f| alone (f changes sign, so the purely relative measure
        // blows up at the crossing for any fixed discretization)
        double scale = (lambda + 2.0 * std::abs(d - c) + 4.0 * rho * rho) * u[i];
        double resid = std::abs(lambda * u[i] + Lu[i] - f) /
                       std::max(std::abs(f), std::max(scale, 1e-30));
        // skip the singular origin, where the log-grid stencil error grows like
        // ds^2 rho^{-2}, and the outermost decade where u underflows
        if (rho >= 0.1 && u[i] > 1e-280) out.residual = std::max(out.residual, resid);
    }
    for (double p : p_list) {
        out.p_list.push_back(p);
        // dyadic-shell quadrature of |u|^p rho^{d-1} near the origin
        double prev = 0, ratio = 0, rho_hi = 1.0;
        for (int level = 0; level < 14; ++level) {
            double rho_lo = rho_hi / 2.0;
            double inc = adaptive_simpson(
                [&](double rho) {
                    return std::pow(rho, -c * p + d - 1.0) * std::exp(-p * rho * rho);
                },
                rho_lo, rho_hi, 1e-13);
            if (level > 3 && prev > 0) ratio = inc / prev;
            prev = inc;
            rho_hi = rho_lo;
        }
        out.member.push_back(ratio < 0.999);
    }
    return out;
}

} // namespace opcalc
