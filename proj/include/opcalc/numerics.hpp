/// Small numerical utilities: adaptive 1-D quadrature, golden-section
/// optimization, and least-squares line fits for slope extraction.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace opcalc {

// adaptive Simpson on [a, b]
namespace detail {
template <class F, class V>
V simpson_rec(F& f, double a, double b, V fa, V fm, V fb, V whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    V flm = f(lm), frm = f(rm);
    V left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
    V right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
    V delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
} // namespace detail

template <class F>
auto adaptive_simpson(F f, double a, double b, double tol = 1e-10, int depth = 40)
    -> decltype(f(a)) {
    auto fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    auto whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, std::abs(tol), depth);
}

// integral over (0, inf) with log substitution t = e^s, expanding the window
// until the tails are below rel_tail of the running value
template <class F>
auto integrate_halfline_log(F f, double rel_tail = 1e-10) -> decltype(f(1.0)) {
    auto g = [&](double s) { double t = std::exp(s); return f(t) * t; };
    double lo = -4.0, hi = 4.0;
    auto val = adaptive_simpson(g, lo, hi, rel_tail);
    for (int guard = 0; guard < 100; ++guard) {
        bool grew = false;
        double scale = std::abs(val);
        if (scale == 0) scale = 1e-300;
        if (std::abs(g(lo)) > rel_tail * scale) {
            val = val + adaptive_simpson(g, lo - 4.0, lo, rel_tail * scale);
            lo -= 4.0;
            grew = true;
        }
        if (std::abs(g(hi)) > rel_tail * scale) {
            val = val + adaptive_simpson(g, hi, hi + 4.0, rel_tail * scale);
            hi += 4.0;
            grew = true;
        }
        if (!grew) break;
    }
    return val;
}

// golden-section maximization on [a, b]
inline std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                            double a, double b, double tol = 1e-12) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}

inline std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                            double a, double b, double tol = 1e-12) {
    auto [x, v] = golden_max([&](double t) { return -f(t); }, a, b, tol);
    return {x, -v};
}

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0; // rms residual of the fit
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    LineFit out;
    double denom = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (out.slope * x[i] + out.intercept);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / n);
    return out;
}

inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return fit_line(lx, ly);
}

} // namespace opcalc
