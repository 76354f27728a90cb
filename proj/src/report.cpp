#include "canard/report.hpp"

#include <cmath>
#include <stdexcept>

#include "canard/characteristic.hpp"
#include "canard/classify.hpp"
#include "canard/folded.hpp"
#include "canard/stability.hpp"

namespace canard {

namespace {

using json = nlohmann::ordered_json;

json system_echo(const SlowFastSystem& system) {
    json j;
    j["circuit"] = system.name.empty() ? "custom" : system.name;
    j["k"] = system.k;
    j["epsilon"] = system.epsilon;
    j["params"] = json::object();
    for (const auto& [key, value] : system.params) j["params"][key] = value;
    if (!system.duck_parameter.empty())
        j["duck_parameter"] = system.duck_parameter;
    return j;
}

json fit_json(const CubicFit& fit) {
    return json{{"c1", fit.c1},
                {"c2", fit.c2},
                {"a", fit.a},
                {"b", fit.b},
                {"d", fit.d},
                {"residual", fit.residual}};
}

json complex_json(const std::complex<double>& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

json sigma_json(const SigmaReport& sr) {
    json j;
    j["sigma1"] = sr.sigma1;
    j["sigma2"] = sr.sigma2;
    j["sigma3"] = sr.sigma3;
    if (sr.k == 3) j["sigma4"] = sr.sigma4;
    j["delta"] = sr.delta;
    j["lambda1"] = complex_json(sr.lambda1);
    j["lambda2"] = complex_json(sr.lambda2);
    j["kind"] = folded_kind_name(sr.kind);
    j["canard_condition"] = sr.canard_exists();
    return j;
}

json routh_hurwitz_json(const RouthHurwitzReport& rh) {
    json j;
    j["coefficients"] = rh.coefficients;
    j["D1"] = rh.d1;
    j["D2"] = rh.d2;
    if (rh.d3) j["D3"] = *rh.d3;
    j["stability"] = rh.flag == StabilityFlag::Stable     ? "stable"
                     : rh.flag == StabilityFlag::Unstable ? "unstable"
                                                          : "marginal";
    return j;
}

}  // namespace

json analysis_report(const SlowFastSystem& system,
                     const AnalyzeOptions& options) {
    json report;
    json failures = json::array();
    report["schema"] = 1;
    report["system"] = system_echo(system);

    // cubic characteristic fit, when the generating slopes are stored
    const auto& p = system.params;
    if (p.count("a") && p.count("b") && p.count("d")) {
        try {
            report["fit"] = fit_json(fit_cubic(p.at("a"), p.at("b"), p.at("d")));
        } catch (const std::exception& e) {
            failures.push_back(std::string("fit: ") + e.what());
        }
    }

    // pseudo-singularities with classification
    std::vector<PseudoSingularity> psps;
    try {
        if (system.k == 2) {
            psps = find_pseudo_singular_points(system, {}, options.residual_tol);
        } else {
            for (auto branch : {PseudoSingularity::Branch::Plus,
                                PseudoSingularity::Branch::Minus}) {
                psps.push_back(pseudo_singular_manifold(
                    system, 1, options.free_value, branch,
                    options.residual_tol));
            }
        }
    } catch (const std::exception& e) {
        failures.push_back(std::string("pseudo-singularities: ") + e.what());
    }

    bool any_saddle = false;
    report["pseudo_singularities"] = json::array();
    for (const auto& psp : psps) {
        json entry;
        entry["state"] = psp.state;
        entry["branch"] =
            psp.sign_branch == PseudoSingularity::Branch::Plus ? "plus"
                                                               : "minus";
        if (psp.free_index) entry["free_index"] = *psp.free_index;
        try {
            const GenericityReport gen = genericity_check(system, psp);
            entry["genericity"] = json{{"f2", gen.f2_value},
                                       {"dg1_dx1", gen.dg1_dx1},
                                       {"d2g1_dy1sq", gen.d2g1_dy1sq},
                                       {"all_pass", gen.all_pass}};
            const SigmaReport sr = classify_folded_singularity(system, psp);
            entry["sigma"] = sigma_json(sr);
            any_saddle = any_saddle || sr.canard_exists();
            const NormalFormCoefficients nf =
                normal_form_coefficients(system, psp);
            entry["normal_form"] = json{
                {"a", nf.a_coeff},
                {"b", nf.b_coeff},
                {"sigma2_minus_2a", sr.sigma2 - 2.0 * nf.a_coeff},
                {"sigma1_plus_b", sr.sigma1 + nf.b_coeff}};
        } catch (const std::exception& e) {
            failures.push_back(std::string("classification: ") + e.what());
        }
        report["pseudo_singularities"].push_back(std::move(entry));
    }

    // full-system fixed points and their linear stability
    report["fixed_points"] = json::array();
    try {
        for (const auto& fp : find_fixed_points(system)) {
            json entry;
            entry["state"] = fp;
            const auto coeffs = characteristic_polynomial(system, fp);
            entry["characteristic_polynomial"] = coeffs;
            entry["routh_hurwitz"] = routh_hurwitz_json(routh_hurwitz(coeffs));
            report["fixed_points"].push_back(std::move(entry));
        }
    } catch (const std::exception& e) {
        failures.push_back(std::string("fixed-points: ") + e.what());
    }

    // canard window in the duck parameter
    bool in_window = false;
    double duck_value = 0.0;
    if (!system.duck_parameter.empty() &&
        system.params.count(system.duck_parameter)) {
        duck_value = system.params.at(system.duck_parameter);
        try {
            const CanardWindow window = canard_window(
                system, system.duck_parameter, options.scan_bound);
            in_window = window.contains(duck_value);
            report["canard_window"] =
                json{{"parameter", window.duck_parameter_name},
                     {"saddle_node", window.saddle_node_value},
                     {"hopf", window.hopf_value},
                     {"low", window.window_low},
                     {"high", window.window_high},
                     {"duck_value", duck_value},
                     {"duck_in_window", in_window}};
        } catch (const std::exception& e) {
            failures.push_back(std::string("canard-window: ") + e.what());
        }
    }

    report["verdict"] = json{
        {"canard_exists", any_saddle && in_window},
        {"condition",
         "sigma2 < 0 at a pseudo-singularity (folded saddle) and the duck "
         "parameter lies strictly inside the canard window"}};
    report["failures"] = std::move(failures);
    return report;
}

}  // namespace canard
