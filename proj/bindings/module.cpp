#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "canard/characteristic.hpp"
#include "canard/circuits.hpp"
#include "canard/classify.hpp"
#include "canard/folded.hpp"
#include "canard/report.hpp"
#include "canard/simulate.hpp"
#include "canard/stability.hpp"
#include "canard/system.hpp"

namespace py = pybind11;
using namespace canard;

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Canard-existence analysis for slow-fast systems with one fast "
        "variable (folded-saddle criterion sigma2 < 0)";

    // characteristic
    py::class_<CubicFit>(m, "CubicFit")
        .def_readonly("c1", &CubicFit::c1)
        .def_readonly("c2", &CubicFit::c2)
        .def_readonly("a", &CubicFit::a)
        .def_readonly("b", &CubicFit::b)
        .def_readonly("d", &CubicFit::d)
        .def_readonly("residual", &CubicFit::residual)
        .def("__repr__", [](const CubicFit& f) {
            return "CubicFit(c1=" + std::to_string(f.c1) +
                   ", c2=" + std::to_string(f.c2) + ")";
        });
    m.def("pwl_charge", &pwl_charge, py::arg("phi"), py::arg("a"),
          py::arg("b"));
    m.def("cubic_charge",
          py::overload_cast<double, double, double>(&cubic_charge),
          py::arg("phi"), py::arg("c1"), py::arg("c2"));
    m.def("fit_cubic", &fit_cubic, py::arg("a"), py::arg("b"), py::arg("d"));
    m.def("square_error", &square_error, py::arg("a"), py::arg("b"),
          py::arg("d"), py::arg("c1"), py::arg("c2"));

    // system
    py::class_<SlowFastSystem>(m, "SlowFastSystem")
        .def_readonly("k", &SlowFastSystem::k)
        .def_readonly("epsilon", &SlowFastSystem::epsilon)
        .def_readonly("params", &SlowFastSystem::params)
        .def_readonly("name", &SlowFastSystem::name)
        .def_readonly("duck_parameter", &SlowFastSystem::duck_parameter)
        .def_property_readonly("dim", &SlowFastSystem::dim)
        .def("with_param", &SlowFastSystem::with_param, py::arg("key"),
             py::arg("value"));
    m.def("make_circuit", &make_circuit, py::arg("name"),
          py::arg("overrides") = ParamMap{});
    m.def("system_from_json", &system_from_json, py::arg("json_text"));
    m.def(
        "eval_rhs",
        [](const SlowFastSystem& s, const std::vector<double>& state,
           bool slow_time) {
            return eval_rhs(s, state,
                            slow_time ? TimeScale::Slow : TimeScale::Fast);
        },
        py::arg("system"), py::arg("state"), py::arg("slow_time") = true);
    m.def(
        "critical_residual",
        [](const SlowFastSystem& s, const std::vector<double>& state) {
            return critical_residual(s, state);
        },
        py::arg("system"), py::arg("state"));
    m.def(
        "sample_critical_manifold",
        [](const SlowFastSystem& s,
           const std::vector<std::pair<double, double>>& ranges,
           const std::vector<int>& resolution) {
            return sample_critical_manifold(s, ranges, resolution).states;
        },
        py::arg("system"), py::arg("ranges"), py::arg("resolution"));
    m.def(
        "reduced_flow",
        [](const SlowFastSystem& s, const std::vector<double>& state) {
            return reduced_flow(s, state);
        },
        py::arg("system"), py::arg("state"));

    // folded singularities
    py::enum_<PseudoSingularity::Branch>(m, "Branch")
        .value("PLUS", PseudoSingularity::Branch::Plus)
        .value("MINUS", PseudoSingularity::Branch::Minus);
    py::class_<PseudoSingularity>(m, "PseudoSingularity")
        .def_readonly("state", &PseudoSingularity::state)
        .def_readonly("free_index", &PseudoSingularity::free_index)
        .def_readonly("sign_branch", &PseudoSingularity::sign_branch);
    py::class_<GenericityReport>(m, "GenericityReport")
        .def_readonly("f2_value", &GenericityReport::f2_value)
        .def_readonly("dg1_dx1", &GenericityReport::dg1_dx1)
        .def_readonly("d2g1_dy1sq", &GenericityReport::d2g1_dy1sq)
        .def_readonly("all_pass", &GenericityReport::all_pass);
    m.def("find_pseudo_singular_points", &find_pseudo_singular_points,
          py::arg("system"),
          py::arg("seeds") = std::vector<std::vector<double>>{},
          py::arg("residual_tol") = 1e-10,
          py::arg("include_equilibria") = false);
    m.def("pseudo_singular_manifold", &pseudo_singular_manifold,
          py::arg("system"), py::arg("free_index"), py::arg("free_value"),
          py::arg("branch") = std::optional<PseudoSingularity::Branch>{},
          py::arg("residual_tol") = 1e-10);
    m.def("genericity_check", &genericity_check, py::arg("system"),
          py::arg("psp"), py::arg("threshold") = 1e-8);

    // classification
    py::enum_<FoldedKind>(m, "FoldedKind")
        .value("SADDLE", FoldedKind::Saddle)
        .value("NODE", FoldedKind::Node)
        .value("FOCUS", FoldedKind::Focus)
        .value("DEGENERATE", FoldedKind::Degenerate);
    py::class_<SigmaReport>(m, "SigmaReport")
        .def_readonly("k", &SigmaReport::k)
        .def_readonly("sigma1", &SigmaReport::sigma1)
        .def_readonly("sigma2", &SigmaReport::sigma2)
        .def_readonly("sigma3", &SigmaReport::sigma3)
        .def_readonly("sigma4", &SigmaReport::sigma4)
        .def_readonly("delta", &SigmaReport::delta)
        .def_readonly("lambda1", &SigmaReport::lambda1)
        .def_readonly("lambda2", &SigmaReport::lambda2)
        .def_readonly("kind", &SigmaReport::kind)
        .def("canard_exists", &SigmaReport::canard_exists);
    py::class_<NormalFormCoefficients>(m, "NormalFormCoefficients")
        .def_readonly("a_coeff", &NormalFormCoefficients::a_coeff)
        .def_readonly("b_coeff", &NormalFormCoefficients::b_coeff);
    m.def("normalized_slow_jacobian", &normalized_slow_jacobian,
          py::arg("system"), py::arg("psp"));
    m.def("sigma_invariants", &sigma_invariants, py::arg("jacobian"));
    m.def("normal_form_coefficients", &normal_form_coefficients,
          py::arg("system"), py::arg("psp"));
    m.def("classify_folded_singularity", &classify_folded_singularity,
          py::arg("system"), py::arg("psp"));

    // stability
    py::enum_<StabilityFlag>(m, "StabilityFlag")
        .value("STABLE", StabilityFlag::Stable)
        .value("UNSTABLE", StabilityFlag::Unstable)
        .value("MARGINAL", StabilityFlag::Marginal);
    py::class_<RouthHurwitzReport>(m, "RouthHurwitzReport")
        .def_readonly("coefficients", &RouthHurwitzReport::coefficients)
        .def_readonly("d1", &RouthHurwitzReport::d1)
        .def_readonly("d2", &RouthHurwitzReport::d2)
        .def_readonly("d3", &RouthHurwitzReport::d3)
        .def_readonly("flag", &RouthHurwitzReport::flag)
        .def("stable", &RouthHurwitzReport::stable);
    py::class_<CanardWindow>(m, "CanardWindow")
        .def_readonly("duck_parameter_name", &CanardWindow::duck_parameter_name)
        .def_readonly("saddle_node_value", &CanardWindow::saddle_node_value)
        .def_readonly("hopf_value", &CanardWindow::hopf_value)
        .def_readonly("window_low", &CanardWindow::window_low)
        .def_readonly("window_high", &CanardWindow::window_high)
        .def("contains", &CanardWindow::contains, py::arg("value"));
    py::class_<SaddleRegion>(m, "SaddleRegion")
        .def_readonly("c1", &SaddleRegion::c1)
        .def_readonly("c2", &SaddleRegion::c2)
        .def_readonly("s", &SaddleRegion::s)
        .def("line_plus", &SaddleRegion::line_plus, py::arg("x2"),
             py::arg("alpha2"))
        .def("line_minus", &SaddleRegion::line_minus, py::arg("x2"),
             py::arg("alpha2"))
        .def("contains", &SaddleRegion::contains, py::arg("x2"),
             py::arg("alpha2"))
        .def("alpha2_intercept", &SaddleRegion::alpha2_intercept);
    py::class_<HopfResult>(m, "HopfResult")
        .def_readonly("value", &HopfResult::value)
        .def_readonly("certified", &HopfResult::certified)
        .def_readonly("pair_real_part", &HopfResult::pair_real_part);
    m.def("find_fixed_points", &find_fixed_points, py::arg("system"),
          py::arg("seeds") = std::vector<std::vector<double>>{});
    m.def(
        "characteristic_polynomial",
        [](const SlowFastSystem& s, const std::vector<double>& fp) {
            return characteristic_polynomial(s, fp);
        },
        py::arg("system"), py::arg("fixed_point"));
    m.def("routh_hurwitz", &routh_hurwitz, py::arg("coefficients"),
          py::arg("marginal_band") = 1e-8);
    m.def("hopf_parameter", &hopf_parameter, py::arg("system"),
          py::arg("duck_parameter_name"), py::arg("bracket_low"),
          py::arg("bracket_high"), py::arg("tol") = 1e-8);
    m.def("canard_window", &canard_window, py::arg("system"),
          py::arg("duck_parameter_name"), py::arg("scan_bound") = 1.0);
    m.def("saddle_region", &saddle_region, py::arg("c1"), py::arg("c2"));

    // simulation
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("accepted_steps", &Trajectory::accepted_steps)
        .def_readonly("rejected_steps", &Trajectory::rejected_steps)
        .def_readonly("max_error_estimate", &Trajectory::max_error_estimate)
        .def_readonly("truncated", &Trajectory::truncated)
        .def_readonly("truncation_reason", &Trajectory::truncation_reason);
    py::class_<CanardSegment>(m, "CanardSegment")
        .def_readonly("t_start", &CanardSegment::t_start)
        .def_readonly("t_end", &CanardSegment::t_end)
        .def_readonly("repelling", &CanardSegment::repelling)
        .def_readonly("mean_abs_g1", &CanardSegment::mean_abs_g1);
    py::class_<CanardSegments>(m, "CanardSegments")
        .def_readonly("segments", &CanardSegments::segments)
        .def_readonly("repelling_time", &CanardSegments::repelling_time);
    m.def(
        "integrate",
        [](const SlowFastSystem& s, std::vector<double> initial,
           double t_final, double rel_tol, double abs_tol, double sample_dt) {
            IntegrateOptions options;
            options.rel_tol = rel_tol;
            options.abs_tol = abs_tol;
            options.sample_dt = sample_dt;
            return integrate(s, std::move(initial), t_final, options);
        },
        py::arg("system"), py::arg("initial_state"), py::arg("t_final"),
        py::arg("rel_tol") = 1e-9, py::arg("abs_tol") = 1e-11,
        py::arg("sample_dt") = 0.0);
    m.def("detect_canard", &detect_canard, py::arg("trajectory"),
          py::arg("system"), py::arg("delta") = 0.05);
    m.def("canard_initial_state", &canard_initial_state, py::arg("system"),
          py::arg("psp"), py::arg("offset") = 1e-3);

    // report
    m.def(
        "analysis_report_json",
        [](const SlowFastSystem& s, double scan_bound, double free_value) {
            AnalyzeOptions options;
            options.scan_bound = scan_bound;
            options.free_value = free_value;
            return analysis_report(s, options).dump(2);
        },
        py::arg("system"), py::arg("scan_bound") = 1.0,
        py::arg("free_value") = 0.0,
        "Full analysis pipeline serialized as a JSON string");
}
