#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "canard/field.hpp"

namespace canard {

enum class TimeScale { Fast, Slow };

/// Singularly perturbed system with k slow variables (k = 2 or 3) and one
/// fast variable. State ordering: slow coordinates first, fast coordinate
/// last, i.e. (x1, ..., xk, y1).
struct SlowFastSystem {
    int k = 2;
    std::vector<ScalarField> slow_fields;  // f1 ... fk
    ScalarField fast_field;                // g1
    ParamMap params;
    double epsilon = 0.1;

    std::string name;            // builder tag, empty for user systems
    std::string duck_parameter;  // preferred sweep parameter, may be empty
    bool smooth = true;          // false for the piecewise-linear builder
    // Closed-form saddle-node value of the duck parameter, when known.
    std::function<double(const ParamMap&)> saddle_node_closed_form;

    int dim() const { return k + 1; }
    int fast_index() const { return k; }

    SlowFastSystem with_param(const std::string& key, double value) const {
        SlowFastSystem s = *this;
        s.params[key] = value;
        return s;
    }
};

std::vector<double> eval_rhs(const SlowFastSystem& system,
                             std::span<const double> state, TimeScale scale);

/// g1 at the state (the epsilon = 0 layer equation); zero iff on M0.
double critical_residual(const SlowFastSystem& system,
                         std::span<const double> state);

struct ManifoldMesh {
    std::vector<std::vector<double>> states;  // row-major over the grid
    // grid nodes where the x1-solve failed, as flat row-major indices
    std::vector<std::size_t> failed_nodes;
};

/// Samples M0 as a graph x1 = phi(free coordinates) over a regular grid.
/// `ranges` and `resolution` cover the k free coordinates (x2, [x3], y1)
/// in state order.
ManifoldMesh sample_critical_manifold(
    const SlowFastSystem& system,
    const std::vector<std::pair<double, double>>& ranges,
    const std::vector<int>& resolution, double residual_tol = 1e-10);

/// Slow-time derivatives of all k+1 coordinates on M0 (the constrained
/// system). Throws std::domain_error on the fold where dg1/dy1 ~ 0.
std::vector<double> reduced_flow(const SlowFastSystem& system,
                                 std::span<const double> state,
                                 double fold_tol = 1e-12);

}  // namespace canard
