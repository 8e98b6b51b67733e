/// Command-line front end. Subcommands: constants, formbound, resolve, evolve,
/// radial, kernels, regularity, report. Exit codes: 0 all pass, 1 any check
/// failed, 2 usage/validation error.
#include <CLI11.hpp>
#include <json.hpp>

#include "opcalc/acceptance.hpp"
#include "opcalc/constants.hpp"
#include "opcalc/drift.hpp"
#include "opcalc/formbound.hpp"
#include "opcalc/kernels.hpp"
#include "opcalc/operators.hpp"
#include "opcalc/radial.hpp"
#include "opcalc/regularity.hpp"
#include "opcalc/resolvent.hpp"
#include "opcalc/semigroup.hpp"

#include <iostream>

namespace {

using namespace opcalc;
using nlohmann::json;

struct CommonOpts {
    int grid = 32;
    double box = 8.0;
    int dim = 3;
    std::uint64_t seed = DEFAULT_SEED;
    std::string out = "out";
    std::vector<std::string> tol_pairs;

    std::map<std::string, double> tol_map() const {
        std::map<std::string, double> m;
        for (const auto& kv : tol_pairs) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--tol", "expected key=value, got '" + kv + "'");
            m[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        return m;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--grid", o.grid, "points per axis (power of two)");
    cmd->add_option("--box", o.box, "box half-width L");
    cmd->add_option("--dim", o.dim, "spatial dimension");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--tol", o.tol_pairs, "named tolerance override key=value");
}

// drift grammar `kind:key=val,key=val` with kinds
// zero | hardy | truncated | mollified (keys c, sign, n, eps)
DriftSpec parse_drift(const std::string& s) {
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::string rest = s.substr(colon + 1);
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--drift", "expected key=val in '" + item + "'");
            kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    auto get = [&](const char* k, double dflt) {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    };
    int sign = get("sign", 1.0) < 0 ? -1 : +1;
    if (kind == "zero") return ZeroDrift{};
    if (kind == "hardy") return HardyDrift{get("c", 0.5), sign};
    if (kind == "truncated") return TruncatedHardy{get("c", 0.5), sign, get("n", 1.0)};
    if (kind == "mollified") return MollifiedHardy{get("c", 0.5), sign, get("eps", 0.5)};
    throw CLI::ValidationError("--drift", "unknown drift kind '" + kind + "'");
}

int finish(const std::vector<ScanResult>& results, const CommonOpts& o) {
    emit_report(results, o.out);
    bool all = true;
    for (const auto& r : results) {
        all = all && r.all_pass();
        std::cout << (r.all_pass() ? "PASS " : "FAIL ") << r.scenario << "\n";
    }
    return all ? 0 : 1;
}

int cmd_constants(const CommonOpts& o, double delta) {
    IntervalReport rep = intervals(delta, o.dim);
    json j;
    j["delta"] = delta;
    j["d"] = o.dim;
    j["m_d"] = rep.m_d;
    j["kappa_d"] = rep.kappa_d;
    j["m_d_star"] = rep.m_d_star;
    j["r_delta"] = rep.r_delta;
    j["ic_empty"] = rep.ic_empty;
    j["im_left"] = rep.im_left;
    j["is_empty"] = rep.is_empty;
    if (!rep.is_empty) {
        j["r_minus"] = rep.r_minus;
        j["r_plus"] = rep.r_plus;
    }
    std::cout << j.dump(2) << std::endl;
    return 0;
}

int cmd_formbound(const CommonOpts& o, const std::string& drift, double lambda,
                  const std::string& cls) {
    Grid g(o.dim, o.grid, o.box);
    VectorField b = sample_drift(parse_drift(drift), g);
    ScanResult res;
    res.scenario = "formbound_" + cls;
    FormBoundReport rep;
    if (cls == "strong")
        rep = estimate_delta_strong(b, make_matrix(IdentityMatrix{}), lambda, g);
    else if (cls == "weak")
        rep = estimate_delta_weak(b, lambda, g);
    else if (cls == "kato")
        rep = kato_norm(b, lambda, g);
    else
        throw CLI::ValidationError("--class", "expected strong|weak|kato");
    res.values["delta_hat"] = rep.delta_hat;
    res.values["lambda"] = rep.lambda;
    res.values["iterations"] = rep.iterations;
    res.values["residual"] = rep.residual;
    std::cout << "delta_hat = " << rep.delta_hat << "  (" << rep.grid_tag << ", "
              << rep.iterations << " iterations)\n";
    return finish({res}, o);
}

int cmd_resolve(const CommonOpts& o, const std::string& drift, double zr, double zi,
                const std::string& method) {
    Grid g(o.dim, o.grid, o.box);
    VectorField b = sample_drift(parse_drift(drift), g);
    Rng rng(o.seed);
    Field f = rng.smooth_field(g, 0.05);
    cplx zeta(zr, zi);
    ScanResult res;
    res.scenario = "resolve_" + method;
    ResolventResult rr;
    if (method == "direct")
        rr = solve_direct(ResolventPlan(ResolventMethod::direct, zeta, 1e-8), b, f);
    else if (method == "hille_lions")
        rr = hille_lions_resolvent(zeta, b, f);
    else if (method == "weak_factor")
        rr = weak_factor_resolvent(zeta, b, f);
    else if (method == "theta_r") {
        double dhat = estimate_delta_weak(b, 0.5, g).delta_hat;
        rr = theta_r_resolvent(zeta, b, 2.0, dhat, 0.5, f);
    } else
        throw CLI::ValidationError("--method", "expected direct|hille_lions|weak_factor|theta_r");
    Field ref = solve_direct(ResolventPlan(ResolventMethod::direct, zeta, 1e-8), b, f).u;
    res.values["norm_u"] = norm2(rr.u);
    res.values["contraction_ratio"] = rr.contraction_ratio;
    res.values["iterations"] = rr.stats.iterations;
    res.add_bound_check("agrees_with_direct", norm2(rr.u - ref) / norm2(f), 1e-6,
                        "factorized route equals the direct solve");
    return finish({res}, o);
}

int cmd_evolve(const CommonOpts& o, const std::string& drift, double t_final, int steps,
               const std::string& scheme) {
    Grid g(o.dim, o.grid, o.box);
    Generator gen = make_generator(make_matrix(IdentityMatrix{}), parse_drift(drift), g);
    Rng rng(o.seed);
    Field f = rng.smooth_field(g, 0.05);
    TimeScheme ts = scheme == "cn" ? TimeScheme::crank_nicolson : TimeScheme::backward_euler;
    EvolutionRun run = evolve([&](const Field& u) { return gen(u); }, f, t_final, steps, ts,
                              {2.0});
    ScanResult res;
    res.scenario = "evolve_" + scheme;
    Series s;
    double dt = t_final / steps;
    for (int k = 0; k <= steps; ++k) {
        s.x.push_back(k * dt);
        s.y.push_back(run.recorded_norms.at(2.0)[k]);
    }
    res.series["l2_norm"] = s;
    res.values["final_l2"] = run.recorded_norms.at(2.0).back();
    res.values["sup_final"] = run.sup_series.back();
    res.values["positivity_min"] = run.positivity_min;
    return finish({res}, o);
}

int cmd_radial(const CommonOpts& o, double c, const std::string& which) {
    RadialCase rc = RadialCase::drift;
    if (which == "matrix") rc = RadialCase::matrix;
    else if (which == "matrix_divergence") rc = RadialCase::matrix_divergence;
    else if (which == "adjoint_drift") rc = RadialCase::adjoint_drift;
    else if (which != "drift")
        throw CLI::ValidationError("--case", "unknown radial case '" + which + "'");
    ScanResult res;
    res.scenario = "radial_" + which;
    RadialGrid rg(1e-4, 1.0, 4096);
    TwoSolutionsReport rep = dirichlet_two_solutions(c, o.dim, rc, rg);
    res.values["alpha"] = rep.alpha;
    res.values["delta"] = rep.delta;
    res.values["residual_u2"] = rep.residual_u2;
    res.values["lr_threshold"] = rep.lr_threshold;
    res.values["max_principle_violated"] = rep.max_principle_violated ? 1.0 : 0.0;
    RadialGrid wide(1e-12, 1e12, 4096);
    double mu = hardy_constant_rayleigh(std::max(c, 0.0), o.dim, wide);
    res.values["hardy_rayleigh"] = mu;
    std::cout << "alpha = " << rep.alpha << ", delta = " << rep.delta
              << ", hardy constant = " << mu << "\n";
    return finish({res}, o);
}

int cmd_kernels(const CommonOpts& o, const std::string& which) {
    std::vector<double> rho;
    for (int i = 0; i < 12; ++i) rho.push_back(0.05 * std::pow(8.0 / 0.05, i / 11.0));
    std::vector<cplx> zetas;
    for (int i = 0; i < 12; ++i) {
        double m = 0.25 * std::pow(32.0 / 0.25, i / 11.0);
        zetas.push_back(which == "A4" || which == "A3"
                            ? m * std::polar(1.0, (i % 2 ? 1.0 : -1.0) * M_PI / 4.0)
                            : cplx(m, 0.0));
    }
    KernelAudit audit = kernel_bound_audit(which, o.dim, zetas, rho);
    ScanResult res;
    res.scenario = "kernels_" + which;
    res.values["max_ratio"] = audit.max_ratio;
    res.values["min_margin"] = audit.min_margin;
    if (which != "A2")
        res.add_bound_check("margin", -audit.min_margin, 1e-8,
                            "kernel bound holds pointwise on the (zeta, rho) lattice");
    else
        std::cout << "A2 measured constant m_{d,r} ~= " << audit.max_ratio << "\n";
    return finish({res}, o);
}

int cmd_regularity(const CommonOpts& o, double c, double q) {
    Grid g(o.dim, o.grid, o.box);
    VectorField b = sample_drift(HardyDrift{c, -1}, g);
    double delta = 4.0 * c * c / ((o.dim - 2.0) * (o.dim - 2.0));
    MuResolventFn R = [&](double mu, const Field& f) {
        return solve_direct(ResolventPlan(ResolventMethod::direct, mu, 1e-6), b, f).u;
    };
    ProbeFactory probe = [&](double mu) {
        int m = std::max(1, static_cast<int>(std::lround(std::sqrt(mu) * g.L / M_PI)));
        m = std::min(m, g.n / 2 - 1);
        double k = M_PI * m / g.L;
        Field f(g);
        std::array<double, 4> x{};
        for (std::size_t i = 0; i < f.size(); ++i) {
            g.node(i, x);
            double r2 = 0;
            for (int ax = 0; ax < g.dim; ++ax) r2 += x[ax] * x[ax];
            f[i] = std::exp(cplx(0.0, k * x[0])) * std::exp(-r2 / 2.0);
        }
        return f;
    };
    GradientScan scan = gradient_bound_scan(R, q, delta, o.dim, {4.0, 16.0, 64.0, 256.0},
                                            probe);
    ScanResult res;
    res.scenario = "regularity_gradient";
    res.values["slope_q"] = scan.fit_q.slope;
    res.values["slope_qj"] = scan.fit_qj.slope;
    res.values["lambda0"] = scan.lambda0;
    res.values["in_theory_range"] = scan.in_theory_range ? 1.0 : 0.0;
    Series s;
    s.x = scan.mu;
    s.y = scan.grad_norm_q;
    s.has_fit = true;
    s.fitted_slope = scan.fit_q.slope;
    s.predicted_slope = scan.theory_slope_q;
    res.series["grad_norm_q"] = s;
    res.add_check("slope_q", scan.fit_q.slope, scan.theory_slope_q, 0.1,
                  "||grad u||_q decays like (mu - lambda_0)^{-1/2}");
    return finish({res}, o);
}

int cmd_report(const CommonOpts& o, const std::string& suite, const std::vector<int>& only) {
    if (suite != "acceptance")
        throw CLI::ValidationError("--suite", "only the 'acceptance' suite is defined");
    AcceptanceConfig cfg;
    cfg.grid_standard = o.grid > 32 ? o.grid : 64;
    cfg.grid_flagship = std::max(o.grid, 64);
    cfg.box = o.box;
    cfg.dim = o.dim;
    cfg.seed = o.seed;
    cfg.tol = o.tol_map();
    cfg.only = only;
    std::vector<ScanResult> results = run_acceptance(cfg, &std::cout);
    emit_report(results, o.out);
    for (const auto& r : results)
        if (!r.all_pass()) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-calculus laboratory for singular-drift Kolmogorov operators"};
    app.require_subcommand(1);

    CommonOpts o;
    double delta = 1.0, lambda = 0.5, zr = 1.0, zi = 0.0, c = 0.5, t_final = 0.5, q = 2.0;
    int steps = 16;
    std::string drift = "hardy:c=0.5", cls = "strong", method = "direct", scheme = "be";
    std::string which = "A1", radial_case = "drift", suite = "acceptance";
    std::vector<int> only;

    auto* constants = app.add_subcommand("constants", "interval calculator + named constants");
    add_common(constants, o);
    constants->add_option("--delta", delta, "form-bound delta");

    auto* formbound = app.add_subcommand("formbound", "form-bound estimators");
    add_common(formbound, o);
    formbound->add_option("--drift", drift, "drift grammar kind:key=val,...");
    formbound->add_option("--lambda", lambda, "shift lambda > 0");
    formbound->add_option("--class", cls, "strong|weak|kato");

    auto* resolve = app.add_subcommand("resolve", "resolvent routes");
    add_common(resolve, o);
    resolve->add_option("--drift", drift, "drift grammar kind:key=val,...");
    resolve->add_option("--zeta-re", zr, "Re zeta");
    resolve->add_option("--zeta-im", zi, "Im zeta");
    resolve->add_option("--method", method, "direct|hille_lions|weak_factor|theta_r");

    auto* evolve = app.add_subcommand("evolve", "semigroup stepping");
    add_common(evolve, o);
    evolve->add_option("--drift", drift, "drift grammar kind:key=val,...");
    evolve->add_option("--tfinal", t_final, "final time");
    evolve->add_option("--steps", steps, "implicit steps");
    evolve->add_option("--scheme", scheme, "be|cn");

    auto* radial = app.add_subcommand("radial", "radial oracles");
    add_common(radial, o);
    radial->add_option("--c", c, "drift strength c");
    radial->add_option("--case", radial_case, "drift|matrix|matrix_divergence|adjoint_drift");

    auto* kernels = app.add_subcommand("kernels", "heat-kernel bound audits");
    add_common(kernels, o);
    kernels->add_option("--which", which, "A1|A2|A3|A4|mstar");

    auto* regularity = app.add_subcommand("regularity", "gradient-bound scans");
    add_common(regularity, o);
    regularity->add_option("--c", c, "attractive Hardy strength");
    regularity->add_option("--q", q, "Lebesgue exponent q >= 2");

    auto* report = app.add_subcommand("report", "scenario suites");
    add_common(report, o);
    report->add_option("--suite", suite, "suite name (acceptance)");
    report->add_option("--only", only, "criterion subset (1-based)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*constants) return cmd_constants(o, delta);
        if (*formbound) return cmd_formbound(o, drift, lambda, cls);
        if (*resolve) return cmd_resolve(o, drift, zr, zi, method);
        if (*evolve) return cmd_evolve(o, drift, t_final, steps, scheme);
        if (*radial) return cmd_radial(o, c, radial_case);
        if (*kernels) return cmd_kernels(o, which);
        if (*regularity) return cmd_regularity(o, c, q);
        if (*report) return cmd_report(o, suite, only);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
