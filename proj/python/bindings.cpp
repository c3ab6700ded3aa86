#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stablehcm/classify.hpp"
#include "stablehcm/envelopes.hpp"
#include "stablehcm/errors.hpp"
#include "stablehcm/hcm.hpp"
#include "stablehcm/io.hpp"
#include "stablehcm/saddle.hpp"
#include "stablehcm/stable_core.hpp"
#include "stablehcm/boundary.hpp"

namespace py = pybind11;
using namespace stablehcm;

PYBIND11_MODULE(_core, m) {
    m.doc() = "One-sided stable densities, the law of S^-beta and its HCM structure";

    static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const NumericalError& e) {
            py::set_error(numerical, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        } catch (const DomainError& e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &QuadratureConfig::rel_tol)
        .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
        .def_readwrite("max_subdivisions", &QuadratureConfig::max_subdivisions)
        .def_readwrite("truncation_tail_tol", &QuadratureConfig::truncation_tail_tol);

    py::class_<StableParams>(m, "StableParams")
        .def(py::init(&StableParams::make), py::arg("alpha"), py::arg("gamma"))
        .def_static("one_sided", &StableParams::one_sided, py::arg("alpha"))
        .def_readonly("alpha", &StableParams::alpha)
        .def_readonly("gamma", &StableParams::gamma)
        .def_readonly("beta", &StableParams::beta)
        .def_readonly("delta", &StableParams::delta)
        .def_readonly("t0", &StableParams::t0)
        .def("__repr__", [](const StableParams& p) {
            return "StableParams(alpha=" + std::to_string(p.alpha) + ", gamma=" + std::to_string(p.gamma) + ")";
        });

    const QuadratureConfig dflt;
    m.def("eval_density", &eval_density, py::arg("params"), py::arg("r"), py::arg("cfg") = dflt);
    m.def("eval_tail", &eval_tail, py::arg("params"), py::arg("x"), py::arg("cfg") = dflt);
    m.def("eval_G_real", &eval_G_real, py::arg("params"), py::arg("x"), py::arg("cfg") = dflt);
    m.def("eval_G_complex", &eval_G_complex, py::arg("params"), py::arg("z"), py::arg("cfg") = dflt);
    m.def("mixture_identity_residual", &mixture_identity_residual, py::arg("alpha"), py::arg("gamma"),
          py::arg("delta_prime"), py::arg("x"), py::arg("cfg") = dflt);
    m.def("half_stable_mixture", &half_stable_mixture, py::arg("alpha"), py::arg("gamma"), py::arg("x"),
          py::arg("cfg") = dflt);

    py::class_<BoundarySample>(m, "BoundarySample")
        .def_readonly("r", &BoundarySample::r)
        .def_readonly("scaled", &BoundarySample::scaled)
        .def_readonly("theta", &BoundarySample::theta)
        .def_readonly("log_modulus", &BoundarySample::log_modulus)
        .def("value", &BoundarySample::value, py::arg("delta"));
    m.def("boundary_value", [](const StableParams& p, double r, const QuadratureConfig& c) { return boundary_value(p, r, c); },
          py::arg("params"), py::arg("r"), py::arg("cfg") = dflt);

    py::class_<ThetaFunction>(m, "ThetaFunction")
        .def_readonly("alpha", &ThetaFunction::alpha)
        .def_readonly("nodes", &ThetaFunction::nodes)
        .def_readonly("theta", &ThetaFunction::theta)
        .def_readonly("scaled_modulus", &ThetaFunction::scaled_modulus)
        .def_readonly("left_limit", &ThetaFunction::left_limit)
        .def_readonly("right_limit", &ThetaFunction::right_limit)
        .def("__call__", &ThetaFunction::operator())
        .def("to_json", [](const ThetaFunction& t) { return io::to_json(t).dump(); });
    m.def("theta_extract",
          [](const StableParams& p, double lo, double hi, const QuadratureConfig& c) { return theta_extract(p, lo, hi, c); },
          py::arg("params"), py::arg("r_min") = 1e-4, py::arg("r_max") = 1e4, py::arg("cfg") = dflt);
    m.def("reconstruct_G", &reconstruct_G, py::arg("params"), py::arg("theta"), py::arg("z"), py::arg("cfg") = dflt,
          py::arg("check_tol") = 0.0);

    py::class_<AsymptoticConstants>(m, "AsymptoticConstants")
        .def_readonly("delta", &AsymptoticConstants::delta)
        .def_readonly("t0", &AsymptoticConstants::t0)
        .def_readonly("c0", &AsymptoticConstants::c0)
        .def_readonly("c_inf", &AsymptoticConstants::c_inf)
        .def_readonly("G_at_1", &AsymptoticConstants::G_at_1);
    m.def("asymptotic_constants", &asymptotic_constants, py::arg("params"), py::arg("cfg") = dflt);

    py::class_<CmProbeReport>(m, "CmProbeReport")
        .def_readonly("pass_", &CmProbeReport::pass)
        .def_readonly("margin", &CmProbeReport::margin)
        .def_readonly("max_order_checked", &CmProbeReport::max_order_checked)
        .def("confident", &CmProbeReport::confident);
    m.def("cm_probe",
          [](const std::function<double(double)>& f, const std::vector<double>& grid, int order, double noise) {
              return cm_probe(f, grid, order, noise);
          },
          py::arg("f"), py::arg("grid"), py::arg("max_order") = 6, py::arg("rel_noise") = 1e-12);
    m.def("geometric_grid", &geometric_grid, py::arg("lo"), py::arg("hi"), py::arg("ratio"));

    py::class_<ClassificationReport>(m, "ClassificationReport")
        .def_readonly("alpha", &ClassificationReport::alpha)
        .def_property_readonly("verdict", [](const ClassificationReport& r) { return std::string(to_string(r.verdict)); })
        .def_readonly("monotonicity_margin", &ClassificationReport::monotonicity_margin)
        .def_readonly("noise_floor", &ClassificationReport::noise_floor)
        .def_property_readonly("extrema", [](const ClassificationReport& r) {
            std::vector<std::pair<double, double>> v;
            for (const auto& e : r.theta_extrema) v.emplace_back(e.r, e.theta);
            return v;
        });
    m.def("classify_alpha", [](double a, const QuadratureConfig& c) { return classify_alpha(a, c); }, py::arg("alpha"),
          py::arg("cfg") = dflt);
    m.def(
        "sign_change_scan",
        [](double a, double g, std::pair<double, double> range, const QuadratureConfig& c)
            -> std::optional<std::pair<double, double>> {
            auto w = sign_change_scan(a, g, range, c);
            if (!w) return std::nullopt;
            return std::make_pair(w->x_pos, w->x_neg);
        },
        py::arg("alpha"), py::arg("gamma"), py::arg("x_range") = std::pair{1e-3, 1e3}, py::arg("cfg") = dflt);

    py::class_<EnvelopeConstants>(m, "EnvelopeConstants")
        .def_readonly("c0", &EnvelopeConstants::c0)
        .def_readonly("c_inf", &EnvelopeConstants::c_inf)
        .def_readonly("G_at_1", &EnvelopeConstants::G_at_1)
        .def_readonly("A_plus", &EnvelopeConstants::A_plus)
        .def_readonly("A_minus", &EnvelopeConstants::A_minus)
        .def_readonly("B_plus", &EnvelopeConstants::B_plus)
        .def_readonly("B_minus", &EnvelopeConstants::B_minus);
    py::class_<EnvelopeReport>(m, "EnvelopeReport")
        .def_readonly("ok", &EnvelopeReport::ok)
        .def_readonly("lower_slack", &EnvelopeReport::lower_slack)
        .def_readonly("upper_slack", &EnvelopeReport::upper_slack);
    m.def("envelope_constants", &envelope_constants, py::arg("params"), py::arg("grid_density") = 200,
          py::arg("cfg") = dflt);
    m.def("check_envelope",
          [](const StableParams& p, const EnvelopeConstants& c, const std::vector<double>& xs, const QuadratureConfig& q) {
              return check_envelope(p, c, xs, q);
          },
          py::arg("params"), py::arg("consts"), py::arg("x_grid"), py::arg("cfg") = dflt);
    m.def("sample", [](const StableParams& p, std::size_t n, std::uint64_t seed) {
        auto s = sample_inverse_beta_power(p, n, seed, envelope_constants(p));
        return py::make_tuple(s.x, s.acceptance_rate);
    }, py::arg("params"), py::arg("n"), py::arg("seed"));

    m.def("laplace_of_G", &laplace_of_G, py::arg("params"), py::arg("z"), py::arg("cfg") = dflt);
    m.def("contour_eval_G", &contour_eval_G, py::arg("params"), py::arg("z"), py::arg("theta"), py::arg("cfg") = dflt);
    m.def("descent_theta", &descent_theta, py::arg("params"), py::arg("z"));
}
