/// Numerical classifiers for the three drift classes:
///   strong    F_delta(A):    ||b_a (lambda + A)^{-1/2}||^2_{2->2}
///   weak half F_delta^{1/2}: |||b|^{1/2} (lambda - Delta)^{-1/4}||^2_{2->2}
///   Kato      K^{d+1}:       |||b| (lambda - Delta)^{-1/2}||_{1->1}
/// all measured at fixed lambda on a fixed grid by power iteration of the
/// symmetric compact surrogate (delta_hat is a certified lower bound).
#pragma once

#include "opcalc/constants.hpp"
#include "opcalc/drift.hpp"
#include "opcalc/kernels.hpp"
#include "opcalc/linsolve.hpp"
#include "opcalc/operators.hpp"

#include <string>

namespace opcalc {

struct FormBoundReport {
    std::string class_kind;
    double delta_hat = 0;
    double lambda = 0;
    int iterations = 0;
    double residual = 0;
    std::string grid_tag;
};

// Realization of (lambda + A)^{-1/2} for a = I. The periodic box needs its
// constant mode excluded (constants are not in L^2(R^d), and at desk-scale
// lambda the mean mode otherwise dominates every estimate); the Dirichlet
// box realization has no constant mode and is the default surrogate.
enum class FormBoundRealization { dirichlet_box, periodic_zero_mode_excluded };

inline std::string grid_tag(const Grid& g) {
    return std::to_string(g.n) + "^" + std::to_string(g.dim) + ",L=" +
           std::to_string(g.L);
}

// start vector overlapping the near-extremal Hardy profiles (power iteration
// still converges from any start; this only cuts the iteration count)
inline Field formbound_start_vector(const Grid& g) {
    Field v(g);
    const double h = g.h();
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.radius(i);
        double rc = std::max(r, h);
        v[i] = std::pow(rc, -0.5) * std::max(1.0 - r / g.L, 0.0);
    }
    return v;
}

// K = J M J with J = (lambda + A)^{-1/2}, M = multiplication by `weight`
// (b_a^2 for the strong class); J realized in the sine or Fourier basis.
inline FormBoundReport estimate_delta_weighted(
    const Field& weight, double lambda, const Grid& g, double bessel_beta,
    FormBoundRealization realization, const char* kind, double tol = 1e-8,
    int max_iter = 10000) {
    if (lambda <= 0) throw std::domain_error("estimate_delta: lambda must be > 0");
    OpFn J;
    if (realization == FormBoundRealization::dirichlet_box) {
        J = [&, lambda, bessel_beta](const Field& f) {
            return apply_dirichlet_multiplier_k2(f, [&](double k2) {
                return std::pow(lambda + k2, -bessel_beta);
            });
        };
    } else {
        J = [&, lambda, bessel_beta](const Field& f) {
            return apply_multiplier_k2(f, [&](double k2) -> cplx {
                if (k2 == 0.0) return 0.0;
                return std::pow(lambda + k2, -bessel_beta);
            });
        };
    }
    OpFn K = [&](const Field& f) { return J(hadamard(weight, J(f))); };
    auto pres = power_iteration(K, formbound_start_vector(g), tol, max_iter);
    FormBoundReport rep;
    rep.class_kind = kind;
    rep.delta_hat = pres.value;
    rep.lambda = lambda;
    rep.iterations = pres.iterations;
    rep.residual = pres.residual;
    rep.grid_tag = grid_tag(g);
    return rep;
}

// strong class with a = I (multiplier route)
inline FormBoundReport estimate_delta_strong(
    const VectorField& b, const MatrixSpec& a, double lambda, const Grid& g,
    FormBoundRealization realization = FormBoundRealization::dirichlet_box,
    double tol = 1e-8, int max_iter = 10000) {
    Field ba = b_a_field(b, a);
    Field ba2 = hadamard(ba, ba);
    if (std::holds_alternative<IdentityMatrix>(a.kind))
        return estimate_delta_weighted(ba2, lambda, g, 0.5, realization, "strong", tol,
                                       max_iter);
    // general a: power iteration on the generalized eigenproblem
    //   M_{b_a^2} v = delta (lambda + A) v
    // via v <- (lambda+A)^{-1} M v and the generalized Rayleigh quotient;
    // same eigenvalues as the symmetric surrogate K_lambda.
    DiscreteOperator A = assemble_A(a, g);
    double sigma = matrix_sigma(a);
    OpFn precond = [&, lambda, sigma](const Field& f) {
        return apply_multiplier_k2(f, [&](double k2) { return 1.0 / (lambda + sigma * k2); });
    };
    OpFn shifted = [&, lambda](const Field& f) {
        Field out = A(f);
        for (std::size_t i = 0; i < f.size(); ++i) out[i] += lambda * f[i];
        return out;
    };
    auto project_mean = [](Field& f) {
        cplx m = mean(f);
        for (auto& x : f.v) x -= m;
    };
    Field v = formbound_start_vector(g);
    project_mean(v);
    v *= 1.0 / norm2(v);
    FormBoundReport rep;
    rep.class_kind = "strong";
    rep.lambda = lambda;
    rep.grid_tag = grid_tag(g);
    double q_old = 0;
    for (int it = 0; it < max_iter; ++it) {
        Field Mv = hadamard(ba2, v);
        SolveStats st;
        Field w = cg(shifted, Mv, st, precond, 1e-10, 400);
        project_mean(w);
        double q = inner(v, Mv).real() / inner(v, shifted(v)).real();
        rep.iterations = it + 1;
        rep.delta_hat = q;
        rep.residual = std::abs(q - q_old) / std::max(std::abs(q), 1e-300);
        double nw = norm2(w);
        if (nw == 0) break;
        w *= 1.0 / nw;
        v = std::move(w);
        if (it > 0 && rep.residual <= tol) break;
        q_old = q;
    }
    return rep;
}

// weak class: delta_hat = top eigenvalue of (lambda-Delta)^{-1/4} M_{|b|} (lambda-Delta)^{-1/4}
inline FormBoundReport estimate_delta_weak(
    const VectorField& b, double lambda, const Grid& g,
    FormBoundRealization realization = FormBoundRealization::dirichlet_box,
    double tol = 1e-8, int max_iter = 10000) {
    Field babs = b.magnitude();
    return estimate_delta_weighted(babs, lambda, g, 0.25, realization, "weak_half", tol,
                                   max_iter);
}

// Kato norm |||b|(lambda-Delta)^{-1/2}||_{1->1}: exact by duality as the max
// over nodes y of sum_x |b(x)| k_{1/2,lambda}(x-y) h^d, evaluated as one
// periodic convolution with the quadrature Bessel kernel.
inline FormBoundReport kato_norm(const VectorField& b, double lambda, const Grid& g) {
    if (lambda <= 0) throw std::domain_error("kato_norm: lambda must be > 0");
    Field babs = b.magnitude();
    Field ker = bessel_kernel_field(0.5, lambda, g);
    // periodic convolution: conv = IFFT(FFT(ker) .* FFT(|b|)) * h^d
    Field kb = babs;
    fft::forward(g, kb.v);
    Field kf = ker;
    fft::forward(g, kf.v);
    for (std::size_t i = 0; i < kb.size(); ++i) kb.v[i] *= kf.v[i];
    fft::backward(g, kb.v);
    double best = 0;
    for (std::size_t i = 0; i < kb.size(); ++i)
        best = std::max(best, kb[i].real() * g.cell_volume());
    FormBoundReport rep;
    rep.class_kind = "kato";
    rep.delta_hat = best;
    rep.lambda = lambda;
    rep.iterations = 1;
    rep.residual = 0;
    rep.grid_tag = grid_tag(g);
    return rep;
}

struct InclusionAudit {
    double delta_strong = 0, delta_weak = 0, kato = 0;
    double weak_of_sum = 0;        // delta_weak(b + f)
    double sum_rule_bound = 0;     // (delta_1^{1/4} + sqrt(delta_2))^2
    bool kato_implies_weak = false;    // delta_weak <= kato + slack
    bool strong_implies_weak = false;  // delta_weak <= sqrt(delta_strong) + slack
    bool sum_rule = false;             // sqrt(weak_of_sum) <= delta_1^{1/4} + sqrt(delta_2) + slack
};

inline InclusionAudit inclusion_audit(const VectorField& b, const VectorField& f,
                                      double lambda, const Grid& g, double slack = 0.05) {
    InclusionAudit audit;
    MatrixSpec id = make_matrix(IdentityMatrix{});
    audit.delta_strong = estimate_delta_strong(b, id, lambda, g).delta_hat;
    audit.delta_weak = estimate_delta_weak(b, lambda, g).delta_hat;
    audit.kato = kato_norm(f, lambda, g).delta_hat;
    VectorField sum = b;
    for (int j = 0; j < g.dim; ++j) sum[j] += f[j];
    audit.weak_of_sum = estimate_delta_weak(sum, lambda, g).delta_hat;
    double s = inclusion_sum_sqrt_delta(audit.delta_strong, audit.kato);
    audit.sum_rule_bound = s * s;
    audit.kato_implies_weak =
        estimate_delta_weak(f, lambda, g).delta_hat <= audit.kato + slack;
    audit.strong_implies_weak =
        audit.delta_weak <= std::sqrt(audit.delta_strong) + slack;
    audit.sum_rule = std::sqrt(audit.weak_of_sum) <= s + slack;
    return audit;
}

// mollification preserves the form bound (elementary pointwise inequalities):
// delta(E_eps b vs E_eps a or I) <= delta(b vs a) + slack
struct MollificationScan {
    double delta_base = 0;
    std::vector<double> eps;
    std::vector<double> delta_mollified;
    bool pass = true;
};

inline MollificationScan mollification_stability(const VectorField& b, const MatrixSpec& a,
                                                 const std::vector<double>& eps_list,
                                                 double lambda, const Grid& g,
                                                 double rel_slack = 0.05) {
    MollificationScan scan;
    scan.delta_base = estimate_delta_strong(b, a, lambda, g).delta_hat;
    for (double eps : eps_list) {
        VectorField bm = mollify_drift(b, eps);
        double dm = estimate_delta_strong(bm, a, lambda, g).delta_hat;
        scan.eps.push_back(eps);
        scan.delta_mollified.push_back(dm);
        if (dm > scan.delta_base * (1.0 + rel_slack) + 1e-12) scan.pass = false;
    }
    return scan;
}

// thm:markwest probe: lower-estimate ||b . grad (lambda + A)^{-1}||_{r->r} by
// seeded probing and compare with the C-part of the paper's bound
// 4 sqrt(C/((r-1) lambda)) (the W-part constant c(r,j) has no closed form).
struct RelativeBoundProbe {
    double probe = 0;
    double c_part_bound = 0;
};

inline RelativeBoundProbe relative_bound_probe(const VectorField& b, const MatrixSpec& a,
                                               double lambda, double r, const Grid& g,
                                               double C_split, int probes = 64,
                                               std::uint64_t seed = DEFAULT_SEED) {
    int d = g.dim;
    if (!(r > 1.0 && r <= 2.0 * d / (d + 2.0)))
        throw std::domain_error("relative_bound_probe: r must lie in (1, 2d/(d+2)]");
    DiscreteOperator A = assemble_A(a, g);
    OpFn res = [&](const Field& f) {
        OpFn shifted = [&](const Field& u) {
            Field out = A(u);
            for (std::size_t i = 0; i < u.size(); ++i) out[i] += lambda * u[i];
            return out;
        };
        OpFn precond = [&](const Field& u) {
            return apply_multiplier_k2(u, [&](double k2) { return 1.0 / (lambda + k2); });
        };
        SolveStats st;
        return cg(shifted, f, st, precond, 1e-10, 400);
    };
    OpFn full = [&](const Field& f) { return apply_drift(b, res(f)); };
    Rng rng(seed);
    RelativeBoundProbe out;
    out.probe = norm_probe(full, g, probes, rng, r, r);
    out.c_part_bound = 4.0 * std::sqrt(C_split / ((r - 1.0) * lambda));
    return out;
}

} // namespace opcalc
