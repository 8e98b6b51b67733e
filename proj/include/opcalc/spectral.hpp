/// Fourier-multiplier calculus on the periodic box: Bessel potentials
/// (zeta - Delta)^{-beta}, spectral gradient/divergence, heat mollifier,
/// and a quadrature route to fractional powers for cross-validation.
#pragma once

#include "opcalc/fft.hpp"
#include "opcalc/grid.hpp"

#include <functional>

namespace opcalc {

// apply a multiplier that depends only on |k|^2
template <class Symbol>
Field apply_multiplier_k2(const Field& f, Symbol&& symbol) {
    const Grid& g = f.grid;
    Field out = f;
    fft::forward(g, out.v);
    std::array<int, 4> idx{};
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        g.decode(flat, idx);
        double k2 = 0;
        for (int ax = 0; ax < g.dim; ++ax) {
            double k = g.freq(idx[ax]);
            k2 += k * k;
        }
        out.v[flat] *= symbol(k2);
    }
    fft::backward(g, out.v);
    return out;
}

// apply a multiplier that depends on the full frequency vector
template <class Symbol>
Field apply_multiplier_k(const Field& f, Symbol&& symbol) {
    const Grid& g = f.grid;
    Field out = f;
    fft::forward(g, out.v);
    std::array<int, 4> idx{};
    std::array<double, 4> k{};
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        g.decode(flat, idx);
        for (int ax = 0; ax < g.dim; ++ax) k[ax] = g.freq(idx[ax]);
        out.v[flat] *= symbol(k, idx);
    }
    fft::backward(g, out.v);
    return out;
}

// Bessel potential (zeta - Delta)^{-beta}; multiplier (zeta + |k|^2)^{-beta}.
// Admissible for Re zeta > 0, or zeta = 0 with the zero mode excluded
// (exclude_zero_mode), the whole-space surrogate for fields with no mean.
inline Field bessel_potential(const Field& f, cplx zeta, double beta,
                              bool exclude_zero_mode = false) {
    if (zeta.real() <= 0 && !exclude_zero_mode)
        throw std::domain_error("bessel_potential: Re zeta <= 0 with zero mode present");
    if (beta <= 0 || beta > 2)
        throw std::domain_error("bessel_potential: beta must be in (0, 2]");
    return apply_multiplier_k2(f, [&](double k2) -> cplx {
        if (exclude_zero_mode && k2 == 0.0) return 0.0;
        return std::pow(zeta + k2, -beta);
    });
}

// spectral gradient; the Nyquist mode's derivative is set to zero (its
// symbol has no well-defined sign on the real grid)
inline VectorField gradient(const Field& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    Field hat = f;
    fft::forward(g, hat.v);
    std::array<int, 4> idx{};
    for (int j = 0; j < g.dim; ++j) {
        Field comp(g);
        for (std::size_t flat = 0; flat < hat.size(); ++flat) {
            g.decode(flat, idx);
            double kj = (idx[j] == g.n / 2) ? 0.0 : g.freq(idx[j]);
            comp.v[flat] = cplx(0, kj) * hat.v[flat];
        }
        fft::backward(g, comp.v);
        out[j] = std::move(comp);
    }
    return out;
}

inline Field divergence(const VectorField& w) {
    const Grid& g = w.grid;
    Field out(g);
    std::array<int, 4> idx{};
    for (int j = 0; j < g.dim; ++j) {
        Field hat = w[j];
        fft::forward(g, hat.v);
        for (std::size_t flat = 0; flat < hat.size(); ++flat) {
            g.decode(flat, idx);
            double kj = (idx[j] == g.n / 2) ? 0.0 : g.freq(idx[j]);
            hat.v[flat] *= cplx(0, kj);
        }
        fft::backward(g, hat.v);
        out += hat;
    }
    return out;
}

// heat mollifier E_eps = e^{eps*Delta}: multiplier e^{-eps|k|^2}
inline Field heat_mollify(const Field& f, double eps) {
    if (eps <= 0) throw std::domain_error("heat_mollify: eps must be > 0");
    return apply_multiplier_k2(f, [&](double k2) { return std::exp(-eps * k2); });
}

// -Delta f (spectral)
inline Field minus_laplacian(const Field& f) {
    return apply_multiplier_k2(f, [](double k2) { return k2; });
}

// Gamma^{-beta} via the resolvent quadrature
//   Gamma^{-beta} = (sin(pi beta)/pi) * (1/(1-beta)) *
//                   d/dmu-free form: int_0^inf mu^{1-beta} (mu + Gamma)^{-2} dmu
// evaluated with the substitution mu = e^s and composite Simpson panels,
// truncated once the tail bound drops below 1e-9 of the running sum.
inline Field fractional_power_by_quadrature(
    const std::function<Field(double, const Field&)>& apply_resolvent, double beta,
    const Field& f, double s_step = 0.25) {
    if (beta <= 0 || beta >= 1)
        throw std::domain_error("fractional_power_by_quadrature: beta in (0,1)");
    const double pref = std::sin(M_PI * beta) / M_PI / (1.0 - beta);
    // integrand in s: mu^{2-beta} (mu+Gamma)^{-2} f with mu = e^s
    auto integrand = [&](double s) {
        double mu = std::exp(s);
        Field r = apply_resolvent(mu, f);     // (mu + Gamma)^{-1} f
        Field rr = apply_resolvent(mu, r);    // (mu + Gamma)^{-2} f
        rr *= std::pow(mu, 2.0 - beta);
        return rr;
    };
    // expand the window [s_lo, s_hi] until both tails are negligible
    double s_lo = -2.0, s_hi = 2.0;
    Field acc(f.grid);
    auto tail_small = [&](const Field& val, const Field& sum) {
        return norm2(val) <= 1e-9 * std::max(norm2(sum), 1e-300);
    };
    // composite Simpson on a fixed step; grow the window adaptively
    std::vector<std::pair<double, Field>> samples;
    for (double s = s_lo; s <= s_hi + 1e-12; s += s_step)
        samples.emplace_back(s, integrand(s));
    auto simpson_sum = [&]() {
        Field total(f.grid);
        for (std::size_t i = 0; i + 2 < samples.size(); i += 2) {
            Field seg = samples[i].second;
            seg += 4.0 * samples[i + 1].second;
            seg += samples[i + 2].second;
            seg *= s_step / 3.0;
            total += seg;
        }
        return total;
    };
    acc = simpson_sum();
    for (int guard = 0; guard < 200; ++guard) {
        bool grew = false;
        if (!tail_small(samples.front().second, acc)) {
            double s = samples.front().first - s_step;
            samples.insert(samples.begin(), {s, integrand(s)});
            // keep an even panel count by adding in pairs
            s -= s_step;
            samples.insert(samples.begin(), {s, integrand(s)});
            grew = true;
        }
        if (!tail_small(samples.back().second, acc)) {
            double s = samples.back().first + s_step;
            samples.emplace_back(s, integrand(s));
            s += s_step;
            samples.emplace_back(s, integrand(s));
            grew = true;
        }
        if (!grew) break;
        acc = simpson_sum();
    }
    acc *= pref;
    return acc;
}

// ---- box-Dirichlet (sine basis) calculus -----------------------------------
// Real-part fields only; eigenvalues |k|^2 with k_j = pi*(m_j+1)/(2L).
template <class Symbol>
Field apply_dirichlet_multiplier_k2(const Field& f, Symbol&& symbol) {
    const Grid& g = f.grid;
    std::vector<double> re(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) re[i] = f[i].real();
    fft::dst2(g, re);
    std::array<int, 4> idx{};
    for (std::size_t flat = 0; flat < re.size(); ++flat) {
        g.decode(flat, idx);
        double k2 = 0;
        for (int ax = 0; ax < g.dim; ++ax) {
            double k = g.dirichlet_freq(idx[ax]);
            k2 += k * k;
        }
        re[flat] *= symbol(k2);
    }
    fft::dst3(g, re);
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = re[i];
    return out;
}

} // namespace opcalc
