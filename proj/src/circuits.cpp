#include "canard/circuits.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "canard/characteristic.hpp"

namespace canard {

namespace {

void apply_overrides(SlowFastSystem& system, const ParamMap& overrides,
                     const std::set<std::string>& known) {
    for (const auto& [key, value] : overrides) {
        if (key == "epsilon") {
            if (value <= 0.0)
                throw std::invalid_argument("epsilon must be positive");
            system.epsilon = value;
            continue;
        }
        if (!known.count(key))
            throw std::invalid_argument("unknown parameter '" + key +
                                        "' for circuit " + system.name);
        system.params[key] = value;
    }
}

// Refit c1, c2 from (a, b, d) when the PWL slopes were overridden but the
// cubic coefficients were not.
void sync_cubic(SlowFastSystem& system, const ParamMap& overrides) {
    const bool pwl_changed =
        overrides.count("a") || overrides.count("b") || overrides.count("d");
    const bool cubic_given = overrides.count("c1") || overrides.count("c2");
    if (pwl_changed && !cubic_given) {
        const CubicFit fit = fit_cubic(system.params.at("a"),
                                       system.params.at("b"),
                                       system.params.at("d"));
        system.params["c1"] = fit.c1;
        system.params["c2"] = fit.c2;
    }
}

template <class T>
T cubic_k(const T& y, const ParamMap& p) {
    return p.at("c1") * y * y * y + p.at("c2") * y;
}

}  // namespace

SlowFastSystem chua3d_cubic(const ParamMap& overrides) {
    SlowFastSystem s;
    s.k = 2;
    s.name = "chua3d_cubic";
    s.duck_parameter = "gamma";
    s.epsilon = 0.1;
    s.params = {{"beta", 0.47},          {"gamma", 0.3275},
                {"c1", 280.0 / 729.0},   {"c2", -26.0 / 27.0},
                {"a", -2.0},             {"b", 4.0},
                {"d", 3.0},              {"C1", 1.0 / 10.0},
                {"C2", 1.0 / 0.47},      {"G", 1.0},
                {"L", 1.0}};
    apply_overrides(s, overrides, {"beta", "gamma", "c1", "c2", "a", "b", "d",
                                   "C1", "C2", "G", "L"});
    sync_cubic(s, overrides);
    s.slow_fields = {
        ScalarField::from([](const auto& x, const ParamMap&) {
            return x[2] - x[1];
        }),
        ScalarField::from([](const auto& x, const ParamMap& p) {
            return p.at("beta") * x[0] + p.at("gamma") * x[1];
        })};
    s.fast_field = ScalarField::from([](const auto& x, const ParamMap& p) {
        return -x[0] - cubic_k(x[2], p);
    });
    s.saddle_node_closed_form = [](const ParamMap& p) {
        return 2.0 * p.at("beta") * p.at("c2") / 3.0;
    };
    return s;
}

SlowFastSystem chua3d_pwl(const ParamMap& overrides) {
    SlowFastSystem s;
    s.k = 2;
    s.name = "chua3d_pwl";
    s.duck_parameter = "gamma";
    s.smooth = false;
    s.epsilon = 0.1;
    s.params = {{"beta", 0.47}, {"gamma", 0.47}, {"a", -2.0}, {"b", 4.0}};
    apply_overrides(s, overrides, {"beta", "gamma", "a", "b"});
    s.slow_fields = {
        ScalarField::from([](const auto& x, const ParamMap&) {
            return x[2] - x[1];
        }),
        ScalarField::from([](const auto& x, const ParamMap& p) {
            return p.at("beta") * x[0] + p.at("gamma") * x[1];
        })};
    s.fast_field = ScalarField::from([](const auto& x, const ParamMap& p) {
        using std::abs;
        return -x[0] - (p.at("b") * x[2] +
                        0.5 * (p.at("a") - p.at("b")) *
                            (abs(x[2] + 1.0) - abs(x[2] - 1.0)));
    });
    return s;
}

SlowFastSystem chua3d_particular(const ParamMap& overrides) {
    SlowFastSystem s;
    s.k = 2;
    s.name = "chua3d_particular";
    s.duck_parameter = "alpha";
    s.epsilon = 0.1;
    s.params = {{"alpha", 0.3}, {"c1", 1.0 / 3.0}, {"c2", -1.0}};
    apply_overrides(s, overrides, {"alpha", "c1", "c2"});
    s.slow_fields = {
        ScalarField::from([](const auto& x, const ParamMap&) {
            return x[2] - x[1];
        }),
        ScalarField::from([](const auto& x, const ParamMap& p) {
            return p.at("alpha") * (x[0] + x[1]);
        })};
    s.fast_field = ScalarField::from([](const auto& x, const ParamMap& p) {
        return -x[0] - cubic_k(x[2], p);
    });
    s.saddle_node_closed_form = [](const ParamMap&) { return 0.0; };
    return s;
}

SlowFastSystem chua4d_cubic(const ParamMap& overrides) {
    SlowFastSystem s;
    s.k = 3;
    s.name = "chua4d_cubic";
    s.duck_parameter = "alpha2";
    s.epsilon = 1.0 / 10.1428;
    s.params = {{"beta1", 0.121},   {"beta2", 0.0047}, {"alpha2", 0.1},
                {"c1", kChua4dC1},  {"c2", kChua4dC2}, {"R", 1.0},
                {"L1", 1.0 / 0.121}, {"L2", 1.0 / 0.0047}, {"C1", 1.0 / 10.1428},
                {"C2", 1.0}};
    apply_overrides(s, overrides, {"beta1", "beta2", "alpha2", "c1", "c2", "R",
                                   "L1", "L2", "C1", "C2"});
    s.slow_fields = {
        ScalarField::from([](const auto& x, const ParamMap& p) {
            return p.at("beta1") * (x[2] - x[0] - x[3]);
        }),
        ScalarField::from([](const auto& x, const ParamMap& p) {
            return p.at("beta2") * x[2];
        }),
        ScalarField::from([](const auto& x, const ParamMap& p) {
            return -x[1] - p.at("alpha2") * x[2] - x[0];
        })};
    s.fast_field = ScalarField::from([](const auto& x, const ParamMap& p) {
        return x[0] - cubic_k(x[3], p);
    });
    s.saddle_node_closed_form = [](const ParamMap& p) {
        return -2.0 * p.at("c2") / (3.0 + 2.0 * p.at("c2"));
    };
    return s;
}

SlowFastSystem make_circuit(const std::string& name,
                            const ParamMap& overrides) {
    if (name == "chua3d_cubic") return chua3d_cubic(overrides);
    if (name == "chua3d_pwl") return chua3d_pwl(overrides);
    if (name == "chua3d_particular") return chua3d_particular(overrides);
    if (name == "chua4d_cubic") return chua4d_cubic(overrides);
    throw std::invalid_argument("unknown circuit '" + name + "'");
}

SlowFastSystem system_from_json(const std::string& json_text) {
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.contains("circuit"))
        throw std::invalid_argument("descriptor: missing \"circuit\"");
    ParamMap overrides;
    if (doc.contains("params"))
        for (const auto& [key, value] : doc.at("params").items())
            overrides[key] = value.get<double>();
    if (doc.contains("epsilon"))
        overrides["epsilon"] = doc.at("epsilon").get<double>();
    return make_circuit(doc.at("circuit").get<std::string>(), overrides);
}

}  // namespace canard
