#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "canard/jet.hpp"

namespace canard {

using ParamMap = std::map<std::string, double>;

/// A scalar field over (state, parameters), registered once as a generic
/// expression program and usable both for plain evaluation and for
/// second-order differentiation through Jet2 arithmetic.
class ScalarField {
public:
    ScalarField() = default;

    template <class F>
    static ScalarField from(F f) {
        ScalarField s;
        s.eval_ = [f](std::span<const double> x, const ParamMap& p) -> double {
            return static_cast<double>(f(x, p));
        };
        s.jet_ = [f](std::span<const Jet2> x, const ParamMap& p) -> Jet2 {
            auto r = f(x, p);
            if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Jet2>)
                return r;
            else
                return Jet2::constant(x.size(), static_cast<double>(r));
        };
        return s;
    }

    double operator()(std::span<const double> state, const ParamMap& p) const {
        return eval_(state, p);
    }

    /// Value, gradient and Hessian at `state`.
    Jet2 jet(std::span<const double> state, const ParamMap& p) const {
        std::vector<Jet2> vars;
        vars.reserve(state.size());
        for (std::size_t i = 0; i < state.size(); ++i)
            vars.push_back(Jet2::variable(state.size(), i, state[i]));
        return jet_(vars, p);
    }

    explicit operator bool() const { return static_cast<bool>(eval_); }

private:
    std::function<double(std::span<const double>, const ParamMap&)> eval_;
    std::function<Jet2(std::span<const Jet2>, const ParamMap&)> jet_;
};

inline Jet2 jet_eval(const ScalarField& field, std::span<const double> point,
                     const ParamMap& params = {}) {
    return field.jet(point, params);
}

}  // namespace canard
