/// Python bindings for the main laboratory operations.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opcalc/constants.hpp"
#include "opcalc/drift.hpp"
#include "opcalc/formbound.hpp"
#include "opcalc/kernels.hpp"
#include "opcalc/operators.hpp"
#include "opcalc/radial.hpp"
#include "opcalc/resolvent.hpp"
#include "opcalc/semigroup.hpp"

namespace py = pybind11;
using namespace opcalc;

namespace {

DriftSpec drift_from(const std::string& kind, double c, int sign, double param) {
    if (kind == "zero") return ZeroDrift{};
    if (kind == "hardy") return HardyDrift{c, sign};
    if (kind == "truncated") return TruncatedHardy{c, sign, param};
    if (kind == "mollified") return MollifiedHardy{c, sign, param};
    throw std::invalid_argument("unknown drift kind '" + kind + "'");
}

py::array_t<std::complex<double>> to_numpy(const Field& f) {
    py::array_t<std::complex<double>> out(f.size());
    auto buf = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < f.size(); ++i) buf(static_cast<py::ssize_t>(i)) = f[i];
    return out;
}

Field from_numpy(const Grid& g, const py::array_t<std::complex<double>>& a) {
    if (static_cast<std::size_t>(a.size()) != g.size())
        throw std::invalid_argument("field size does not match the grid");
    Field f(g);
    auto buf = a.unchecked<1>();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = buf(static_cast<py::ssize_t>(i));
    return f;
}

} // namespace

PYBIND11_MODULE(_opcalc, m) {
    m.doc() = "numerical operator calculus for Kolmogorov operators with singular drift";

    m.def("m_d", &m_d, py::arg("d"));
    m.def("kappa_d", &kappa_d, py::arg("d"));
    m.def("m_d_star", &m_d_star, py::arg("d"));
    m.def("r_delta", &r_delta, py::arg("delta"));
    m.def("omega_r", &omega_r, py::arg("delta"), py::arg("lambda_"), py::arg("r"));

    m.def(
        "intervals",
        [](double delta, int d) {
            IntervalReport r = intervals(delta, d);
            py::dict out;
            out["delta"] = r.delta;
            out["d"] = r.d;
            out["r_delta"] = r.r_delta;
            out["ic_empty"] = r.ic_empty;
            out["im_left"] = r.im_left;
            out["is_empty"] = r.is_empty;
            out["r_minus"] = r.r_minus;
            out["r_plus"] = r.r_plus;
            out["m_d"] = r.m_d;
            out["kappa_d"] = r.kappa_d;
            out["m_d_star"] = r.m_d_star;
            return out;
        },
        py::arg("delta"), py::arg("d"));

    m.def(
        "moser_schedule",
        [](double r0, double q, int d, int terms) {
            IterationSchedule s = moser_schedule(r0, q, d, terms);
            py::dict out;
            out["t"] = s.t;
            out["x_prime"] = s.x_prime;
            out["gamma"] = s.gamma;
            out["r_seq"] = s.r_seq;
            out["gamma_seq"] = s.gamma_seq;
            out["alpha_seq"] = s.alpha_seq;
            return out;
        },
        py::arg("r0"), py::arg("q"), py::arg("d"), py::arg("terms") = 24);

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int, double, bool>(), py::arg("dim"), py::arg("n"),
             py::arg("box"), py::arg("origin_offset") = true)
        .def_readonly("dim", &Grid::dim)
        .def_readonly("n", &Grid::n)
        .def_readonly("L", &Grid::L)
        .def("h", &Grid::h)
        .def("size", &Grid::size);

    m.def(
        "estimate_delta",
        [](const Grid& g, const std::string& klass, const std::string& kind, double c,
           int sign, double param, double lam) {
            VectorField b = sample_drift(drift_from(kind, c, sign, param), g);
            FormBoundReport rep;
            if (klass == "strong")
                rep = estimate_delta_strong(b, make_matrix(IdentityMatrix{}), lam, g);
            else if (klass == "weak")
                rep = estimate_delta_weak(b, lam, g);
            else if (klass == "kato")
                rep = kato_norm(b, lam, g);
            else
                throw std::invalid_argument("class must be strong|weak|kato");
            py::dict out;
            out["delta_hat"] = rep.delta_hat;
            out["lambda"] = rep.lambda;
            out["iterations"] = rep.iterations;
            out["residual"] = rep.residual;
            out["grid"] = rep.grid_tag;
            return out;
        },
        py::arg("grid"), py::arg("klass"), py::arg("kind") = "hardy", py::arg("c") = 0.5,
        py::arg("sign") = 1, py::arg("param") = 0.5, py::arg("lambda_") = 1e-3);

    m.def(
        "resolve",
        [](const Grid& g, std::complex<double> zeta, const std::string& kind, double c,
           int sign, double param, const py::array_t<std::complex<double>>& f_in,
           const std::string& method) {
            VectorField b = sample_drift(drift_from(kind, c, sign, param), g);
            Field f = from_numpy(g, f_in);
            ResolventResult rr;
            if (method == "direct")
                rr = solve_direct(ResolventPlan(ResolventMethod::direct, zeta, 1e-8), b, f);
            else if (method == "hille_lions")
                rr = hille_lions_resolvent(zeta, b, f);
            else if (method == "weak_factor")
                rr = weak_factor_resolvent(zeta, b, f);
            else
                throw std::invalid_argument("method must be direct|hille_lions|weak_factor");
            return to_numpy(rr.u);
        },
        py::arg("grid"), py::arg("zeta"), py::arg("kind"), py::arg("c"), py::arg("sign"),
        py::arg("param"), py::arg("f"), py::arg("method") = "direct");

    m.def(
        "evolve",
        [](const Grid& g, const std::string& kind, double c, int sign, double param,
           const py::array_t<std::complex<double>>& f_in, double t_final, int steps) {
            Generator gen =
                make_generator(make_matrix(IdentityMatrix{}), drift_from(kind, c, sign, param), g);
            Field f = from_numpy(g, f_in);
            EvolutionRun run = evolve([&](const Field& u) { return gen(u); }, f, t_final,
                                      steps, TimeScheme::backward_euler, {2.0});
            py::dict out;
            out["l2_series"] = run.recorded_norms.at(2.0);
            out["sup_series"] = run.sup_series;
            out["positivity_min"] = run.positivity_min;
            out["final"] = to_numpy(run.final_state);
            return out;
        },
        py::arg("grid"), py::arg("kind"), py::arg("c"), py::arg("sign"), py::arg("param"),
        py::arg("f"), py::arg("t_final"), py::arg("steps") = 16);

    m.def(
        "hardy_constant",
        [](double c, int d) {
            RadialGrid rg(1e-12, 1e12, 4096);
            return hardy_constant_rayleigh(c, d, rg);
        },
        py::arg("c"), py::arg("d") = 3);

    m.def("bessel_kernel", &bessel_kernel, py::arg("beta"), py::arg("zeta"), py::arg("d"),
          py::arg("rho"));
}
