/// Discrete generators: A = -div(a grad) assembled spectrally (exact for
/// a = I, Galerkin with spectral derivatives for general a), the drift
/// operator b . grad, and the accretivity / Markov-criteria functionals.
#pragma once

#include "opcalc/drift.hpp"
#include "opcalc/grid.hpp"
#include "opcalc/rng.hpp"
#include "opcalc/spectral.hpp"

#include <functional>
#include <string>

namespace opcalc {

struct DiscreteOperator {
    std::function<Field(const Field&)> apply;
    bool symmetric = false;
    std::string label;
    double spectral_lower_bound = 0.0;

    Field operator()(const Field& f) const { return apply(f); }
};

enum class Boundary { periodic, box_dirichlet };
enum class DriftScheme { centered, upwind };

// per-node matrix samples flattened to d*d fields (identity matrices skip storage)
struct MatrixField {
    Grid grid;
    bool identity = true;
    std::vector<Field> a; // d*d entries, row-major

    static MatrixField sample(const MatrixSpec& spec, const Grid& g) {
        MatrixField mf;
        mf.grid = g;
        if (std::holds_alternative<IdentityMatrix>(spec.kind)) return mf;
        mf.identity = false;
        const int d = g.dim;
        mf.a.assign(d * d, Field(g));
        std::array<double, 4> x{};
        double mat[16];
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.node(i, x);
            matrix_at(spec, x, d, mat);
            for (int p = 0; p < d * d; ++p) mf.a[p][i] = mat[p];
        }
        return mf;
    }
};

// A = -div(a grad u) built as G* a G with the spectral gradient G, so the
// assembled operator is exactly Hermitian and nonnegative for SPD a;
// for a = I it coincides with the spectral -Delta.
// box_dirichlet realizes A_D in the sine eigenbasis (a = I only).
inline DiscreteOperator assemble_A(const MatrixSpec& spec, const Grid& g,
                                   Boundary boundary = Boundary::periodic) {
    DiscreteOperator op;
    op.symmetric = true;
    op.spectral_lower_bound = 0.0;
    if (std::holds_alternative<IdentityMatrix>(spec.kind)) {
        if (boundary == Boundary::periodic) {
            op.label = "-Delta (spectral, periodic)";
            op.apply = [](const Field& f) { return minus_laplacian(f); };
        } else {
            op.label = "-Delta (Dirichlet box)";
            double k0 = M_PI / (2.0 * g.L);
            op.spectral_lower_bound = g.dim * k0 * k0;
            op.apply = [](const Field& f) {
                return apply_dirichlet_multiplier_k2(f, [](double k2) { return k2; });
            };
        }
        return op;
    }
    if (boundary == Boundary::box_dirichlet)
        throw std::invalid_argument("assemble_A: box_dirichlet supports a = I only");
    MatrixField mf = MatrixField::sample(spec, g);
    double sigma = matrix_sigma(spec);
    if (sigma <= 0) throw std::invalid_argument("assemble_A: matrix positivity violated");
    const int d = g.dim;
    op.label = "-div(a grad) (Galerkin spectral)";
    op.apply = [mf, d](const Field& f) {
        VectorField gf = gradient(f);
        VectorField flux(f.grid);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (std::size_t p = 0; p < f.size(); ++p)
                    flux[i][p] += mf.a[i * d + j][p] * gf[j][p];
        Field out = divergence(flux);
        out *= -1.0;
        return out;
    };
    return op;
}

// b . grad u; centered = spectral gradient, upwind = first-order one-sided
inline Field apply_drift(const VectorField& b, const Field& u,
                         DriftScheme scheme = DriftScheme::centered) {
    const Grid& g = u.grid;
    Field out(g);
    if (scheme == DriftScheme::centered) {
        VectorField gu = gradient(u);
        for (int j = 0; j < g.dim; ++j)
            for (std::size_t i = 0; i < u.size(); ++i) out[i] += b[j][i] * gu[j][i];
        return out;
    }
    // upwind: shift along each axis
    const double h = g.h();
    std::array<int, 4> idx{};
    for (int j = 0; j < g.dim; ++j) {
        std::size_t stride = 1;
        for (int ax = g.dim - 1; ax > j; --ax) stride *= g.n;
        for (std::size_t i = 0; i < u.size(); ++i) {
            g.decode(i, idx);
            double bj = b[j][i].real();
            std::size_t up, dn;
            // periodic neighbor indices along axis j
            std::size_t base = i - static_cast<std::size_t>(idx[j]) * stride;
            up = base + static_cast<std::size_t>((idx[j] + 1) % g.n) * stride;
            dn = base + static_cast<std::size_t>((idx[j] + g.n - 1) % g.n) * stride;
            cplx diff = bj > 0 ? (u[i] - u[dn]) : (u[up] - u[i]);
            out[i] += bj * diff / h;
        }
    }
    return out;
}

// full generator L = A + b . grad
struct Generator {
    DiscreteOperator A;
    VectorField b;
    DriftScheme scheme = DriftScheme::centered;
    bool has_drift = true;

    Field operator()(const Field& u) const {
        Field out = A(u);
        if (has_drift) out += apply_drift(b, u, scheme);
        return out;
    }
};

inline Generator make_generator(const MatrixSpec& a, const DriftSpec& bspec, const Grid& g,
                                Boundary boundary = Boundary::periodic,
                                DriftScheme scheme = DriftScheme::centered) {
    Generator gen;
    gen.A = assemble_A(a, g, boundary);
    gen.b = sample_drift(bspec, g);
    gen.scheme = scheme;
    gen.has_drift = !std::holds_alternative<ZeroDrift>(bspec);
    return gen;
}

// |f|^{r-1} sgn f  (complex sign)
inline Field power_sign(const Field& f, double p) {
    Field out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double m = std::abs(f[i]);
        out[i] = (m == 0.0) ? cplx(0) : std::pow(m, p) * (f[i] / m);
    }
    return out;
}

// <L u, u |u|^{r-2}> with the discrete inner product
inline cplx accretivity_functional(const std::function<Field(const Field&)>& L, double r,
                                   const Field& u) {
    Field Lu = L(u);
    Field w = power_sign(u, r - 1.0);
    return inner(w, Lu);
}

struct ScanRecord {
    std::string name;
    double measured = 0;
    double bound = 0;
    bool pass = true;
};

// Appendix B conditions: (i') [Af, f+] >= 0 (Phillips) and
// (ii') Re[Af, f - f_and] >= 0 (Stampacchia), f_and = (|f| ^ 1) sgn f
inline std::pair<double, double> phillips_stampacchia_check(
    const std::function<Field(const Field&)>& L, const Grid& g, int samples, Rng& rng) {
    double min_ph = INFINITY, min_st = INFINITY;
    for (int s = 0; s < samples; ++s) {
        Field f = rng.smooth_field(g, 0.02);
        Field Lf = L(f);
        Field fplus(g), fcut(g);
        for (std::size_t i = 0; i < f.size(); ++i) {
            double re = f[i].real();
            fplus[i] = re > 0 ? re : 0.0;
            double m = std::abs(f[i]);
            fcut[i] = (m == 0) ? cplx(0) : std::min(m, 1.0) * (f[i] / m);
        }
        min_ph = std::min(min_ph, inner(fplus, Lf).real());
        Field diff = f - fcut;
        min_st = std::min(min_st, inner(diff, Lf).real());
    }
    return {min_ph, min_st};
}

// Appendix E (thm:markovest): with f_(r) = |f|^{r/2} sgn f,
//  (4/rr') ||A^{1/2} f_(r)||^2 <= Re <A_r f, |f|^{r-1} sgn f> <= vk(r) ||A^{1/2} f_(r)||^2,
//  |Im <...>| <= (|r-2| / (2 sqrt(r-1))) Re <...>.
struct LrInequalityResult {
    double min_lower_margin = INFINITY;  // Re - (4/rr')||.||^2  (>= 0 expected)
    double min_upper_margin = INFINITY;  // vk(r)||.||^2 - Re    (>= 0 expected)
    double min_im_margin = INFINITY;     // (|r-2|/2sqrt(r-1)) Re - |Im|
};

inline LrInequalityResult lr_inequality_check(
    const std::function<Field(const Field&)>& A,
    const std::function<Field(const Field&)>& sqrtA, double r, double vk, const Grid& g,
    int samples, Rng& rng) {
    LrInequalityResult res;
    double rp = r / (r - 1.0);
    for (int s = 0; s < samples; ++s) {
        Field f = heat_mollify(rng.complex_field(g), 0.02);
        cplx q = accretivity_functional(A, r, f);
        Field fr = power_sign(f, r / 2.0);
        double e = norm2(sqrtA(fr));
        e = e * e;
        res.min_lower_margin = std::min(res.min_lower_margin, q.real() - 4.0 / (r * rp) * e);
        res.min_upper_margin = std::min(res.min_upper_margin, vk * e - q.real());
        res.min_im_margin = std::min(
            res.min_im_margin,
            std::abs(r - 2.0) / (2.0 * std::sqrt(r - 1.0)) * q.real() - std::abs(q.imag()));
    }
    return res;
}

} // namespace opcalc
