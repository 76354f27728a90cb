#include "canard/system.hpp"

#include <cmath>
#include <stdexcept>

namespace canard {

std::vector<double> eval_rhs(const SlowFastSystem& system,
                             std::span<const double> state, TimeScale scale) {
    if (static_cast<int>(state.size()) != system.dim())
        throw std::invalid_argument("eval_rhs: state dimension mismatch");
    std::vector<double> rhs(system.dim());
    for (int i = 0; i < system.k; ++i)
        rhs[i] = system.slow_fields[i](state, system.params);
    const double g = system.fast_field(state, system.params);
    if (scale == TimeScale::Fast) {
        for (int i = 0; i < system.k; ++i) rhs[i] *= system.epsilon;
        rhs[system.k] = g;
    } else {
        rhs[system.k] = g / system.epsilon;
    }
    return rhs;
}

double critical_residual(const SlowFastSystem& system,
                         std::span<const double> state) {
    if (static_cast<int>(state.size()) != system.dim())
        throw std::invalid_argument(
            "critical_residual: state dimension mismatch");
    return system.fast_field(state, system.params);
}

namespace {

// Newton solve of g1(x1, fixed others) = 0 for x1.
bool solve_x1(const SlowFastSystem& system, std::vector<double>& state,
              double tol) {
    for (int iter = 0; iter < 50; ++iter) {
        const Jet2 g = system.fast_field.jet(state, system.params);
        if (std::abs(g.value()) < tol) return true;
        const double slope = g.grad(0);
        if (slope == 0.0) return false;
        state[0] -= g.value() / slope;
    }
    return std::abs(system.fast_field(state, system.params)) < tol;
}

}  // namespace

ManifoldMesh sample_critical_manifold(
    const SlowFastSystem& system,
    const std::vector<std::pair<double, double>>& ranges,
    const std::vector<int>& resolution, double residual_tol) {
    const int k = system.k;
    if (static_cast<int>(ranges.size()) != k ||
        static_cast<int>(resolution.size()) != k)
        throw std::invalid_argument(
            "sample_critical_manifold: need one range and count per free "
            "coordinate");

    ManifoldMesh mesh;
    std::size_t total = 1;
    for (int c : resolution) {
        if (c < 1)
            throw std::invalid_argument(
                "sample_critical_manifold: resolution must be >= 1");
        total *= static_cast<std::size_t>(c);
    }
    mesh.states.reserve(total);

    std::vector<int> idx(k, 0);
    for (std::size_t node = 0; node < total; ++node) {
        std::vector<double> state(system.dim(), 0.0);
        for (int c = 0; c < k; ++c) {
            const auto [lo, hi] = ranges[c];
            const int n = resolution[c];
            state[c + 1] =
                n == 1 ? lo : lo + (hi - lo) * idx[c] / double(n - 1);
        }
        if (solve_x1(system, state, residual_tol))
            mesh.states.push_back(std::move(state));
        else
            mesh.failed_nodes.push_back(node);

        for (int c = k - 1; c >= 0; --c) {  // row-major increment
            if (++idx[c] < resolution[c]) break;
            idx[c] = 0;
        }
    }
    return mesh;
}

std::vector<double> reduced_flow(const SlowFastSystem& system,
                                 std::span<const double> state,
                                 double fold_tol) {
    if (static_cast<int>(state.size()) != system.dim())
        throw std::invalid_argument("reduced_flow: state dimension mismatch");
    if (std::abs(critical_residual(system, state)) > 1e-8)
        throw std::invalid_argument("reduced_flow: state is not on M0");

    const Jet2 g = system.fast_field.jet(state, system.params);
    const double dg_dy = g.grad(system.k);
    if (std::abs(dg_dy) < fold_tol)
        throw std::domain_error(
            "reduced_flow: fold point, dg1/dy1 vanishes");

    std::vector<double> rhs(system.dim());
    double numerator = 0.0;
    for (int i = 0; i < system.k; ++i) {
        rhs[i] = system.slow_fields[i](state, system.params);
        numerator += g.grad(i) * rhs[i];
    }
    rhs[system.k] = -numerator / dg_dy;
    return rhs;
}

}  // namespace canard
