/// Iterative linear solvers on fields: preconditioned conjugate gradients for
/// Hermitian positive operators and restarted GMRES for the drift-perturbed
/// resolvent solves.
#pragma once

#include "opcalc/grid.hpp"
#include "opcalc/rng.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace opcalc {

using OpFn = std::function<Field(const Field&)>;

struct SolveStats {
    int iterations = 0;
    double residual = 0;
    bool converged = false;
};

inline Field identity_precond(const Field& f) { return f; }

// preconditioned CG; op must be Hermitian positive definite, M an SPD preconditioner
inline Field cg(const OpFn& op, const Field& rhs, SolveStats& stats,
                const OpFn& M = identity_precond, double tol = 1e-10, int max_iter = 500) {
    Field x(rhs.grid);
    Field r = rhs;
    Field z = M(r);
    Field p = z;
    cplx rz = inner(r, z);
    double rhs_norm = norm2(rhs);
    if (rhs_norm == 0) { stats = {0, 0, true}; return x; }
    for (int it = 0; it < max_iter; ++it) {
        Field Ap = op(p);
        cplx alpha = rz / inner(p, Ap);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rn = norm2(r);
        stats.iterations = it + 1;
        stats.residual = rn / rhs_norm;
        if (stats.residual <= tol) { stats.converged = true; return x; }
        z = M(r);
        cplx rz_new = inner(r, z);
        cplx beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    stats.converged = false;
    return x;
}

// restarted GMRES(m) with left preconditioning: solves op(x) = rhs
inline Field gmres(const OpFn& op, const Field& rhs, SolveStats& stats,
                   const OpFn& M = identity_precond, double tol = 1e-10, int restart = 30,
                   int max_outer = 40) {
    const Grid& g = rhs.grid;
    Field x(g);
    Field Mrhs = M(rhs);
    double beta0 = norm2(Mrhs);
    if (beta0 == 0) { stats = {0, 0, true}; return x; }
    stats.iterations = 0;
    for (int outer = 0; outer < max_outer; ++outer) {
        Field r = rhs - op(x);
        r = M(r);
        double beta = norm2(r);
        stats.residual = beta / beta0;
        if (stats.residual <= tol) { stats.converged = true; return x; }
        std::vector<Field> V;
        V.reserve(restart + 1);
        Field v0 = r; v0 *= 1.0 / beta;
        V.push_back(std::move(v0));
        // Hessenberg (column-major per iteration) and Givens rotations
        std::vector<std::vector<cplx>> H;
        std::vector<cplx> cs(restart), sn(restart);
        std::vector<cplx> s(restart + 1, 0.0);
        s[0] = beta;
        int k = 0;
        for (; k < restart; ++k) {
            Field w = M(op(V[k]));
            std::vector<cplx> h(k + 2, 0.0);
            for (int i = 0; i <= k; ++i) {
                h[i] = inner(V[i], w);
                for (std::size_t p = 0; p < w.size(); ++p) w[p] -= h[i] * V[i][p];
            }
            h[k + 1] = norm2(w);
            if (std::abs(h[k + 1]) > 1e-300) {
                Field vk = w; vk *= 1.0 / h[k + 1].real();
                V.push_back(std::move(vk));
            }
            // apply existing rotations
            for (int i = 0; i < k; ++i) {
                cplx t = std::conj(cs[i]) * h[i] + std::conj(sn[i]) * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            double denom = std::sqrt(std::norm(h[k]) + std::norm(h[k + 1]));
            if (denom == 0) { cs[k] = 1.0; sn[k] = 0.0; }
            else { cs[k] = h[k] / denom; sn[k] = h[k + 1] / denom; }
            h[k] = std::conj(cs[k]) * h[k] + std::conj(sn[k]) * h[k + 1];
            h[k + 1] = 0.0;
            s[k + 1] = -sn[k] * s[k];
            s[k] = std::conj(cs[k]) * s[k];
            H.push_back(std::move(h));
            ++stats.iterations;
            stats.residual = std::abs(s[k + 1]) / beta0;
            if (stats.residual <= tol) { ++k; break; }
            if (static_cast<int>(V.size()) == k + 1) { ++k; break; } // breakdown
        }
        // back substitution
        std::vector<cplx> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            cplx sum = s[i];
            for (int j = i + 1; j < k; ++j) sum -= H[j][i] * y[j];
            y[i] = sum / H[i][i];
        }
        for (int i = 0; i < k; ++i)
            for (std::size_t p = 0; p < x.size(); ++p) x[p] += y[i] * V[i][p];
        if (stats.residual <= tol) {
            // confirm with the true residual
            Field rr = rhs - op(x);
            stats.residual = norm2(rr) / norm2(rhs);
            if (stats.residual <= 10 * tol) { stats.converged = true; return x; }
        }
    }
    stats.converged = stats.residual <= tol;
    return x;
}

// power iteration for the top eigenvalue of a Hermitian nonnegative operator;
// returns the final Rayleigh quotient (a certified lower bound at every step)
struct PowerIterResult {
    double value = 0;
    int iterations = 0;
    double residual = 0; // |q_k - q_{k-1}| / q_k at exit
    bool converged = false;
};

inline PowerIterResult power_iteration(const OpFn& op, Field v, double tol = 1e-8,
                                       int max_iter = 10000) {
    PowerIterResult res;
    double nv = norm2(v);
    if (nv == 0) throw std::invalid_argument("power_iteration: zero start vector");
    v *= 1.0 / nv;
    double q_old = 0;
    for (int it = 0; it < max_iter; ++it) {
        Field w = op(v);
        double q = inner(v, w).real();
        res.iterations = it + 1;
        res.value = q;
        double nw = norm2(w);
        if (nw == 0) { res.converged = true; res.residual = 0; return res; }
        w *= 1.0 / nw;
        v = std::move(w);
        res.residual = std::abs(q - q_old) / std::max(std::abs(q), 1e-300);
        if (it > 0 && res.residual <= tol) { res.converged = true; return res; }
        q_old = q;
    }
    return res;
}

// probe the operator norm sup ||op f||_{p_out} / ||f||_{p_in} over seeded
// random smooth fields (a certified lower bound)
inline double norm_probe(const OpFn& op, const Grid& g, int probes, Rng& rng,
                         double p_in = 2.0, double p_out = 2.0) {
    double best = 0;
    for (int i = 0; i < probes; ++i) {
        Field f = rng.smooth_field(g, 0.02);
        double nf = lp_norm(f, p_in);
        if (nf == 0) continue;
        best = std::max(best, lp_norm(op(f), p_out) / nf);
    }
    return best;
}

} // namespace opcalc
