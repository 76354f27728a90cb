#pragma once

#include <optional>
#include <vector>

#include "canard/system.hpp"

namespace canard {

/// A solution of g1 = 0, dg1/dy1 = 0, sum_i dg1/dxi * fi = 0. For k = 3 the
/// solutions form a curve; `free_index` names the coordinate that was pinned.
struct PseudoSingularity {
    std::vector<double> state;
    std::optional<int> free_index;  // present iff k = 3
    enum class Branch { Plus, Minus } sign_branch = Branch::Plus;
};

struct GenericityReport {
    double f2_value = 0.0;
    double dg1_dx1 = 0.0;
    double d2g1_dy1sq = 0.0;
    bool all_pass = false;
};

/// The three defining residuals (g1, dg1/dy1, G1) at a state.
std::vector<double> pseudo_singular_residuals(const SlowFastSystem& system,
                                              std::span<const double> state);

/// Damped-Newton search from each seed (k = 2). Duplicates within 1e-6 in
/// the max norm are merged; candidates that are fixed points of the full
/// system are discarded unless include_equilibria is set (used when a
/// parameter sweep passes exactly through the degenerate value where a
/// pseudo-singularity collides with an equilibrium).
std::vector<PseudoSingularity> find_pseudo_singular_points(
    const SlowFastSystem& system,
    const std::vector<std::vector<double>>& seeds = {},
    double residual_tol = 1e-10, bool include_equilibria = false);

/// One point of the pseudo-singular manifold (k = 3) with state[free_index]
/// pinned to free_value. `branch` selects one of the two symmetric solution
/// branches by the sign of y1. Throws on non-convergence.
PseudoSingularity pseudo_singular_manifold(
    const SlowFastSystem& system, int free_index, double free_value,
    std::optional<PseudoSingularity::Branch> branch = {},
    double residual_tol = 1e-10);

/// Non-degeneracy hypotheses at a pseudo-singularity, evaluated in place
/// (no translation to the origin).
GenericityReport genericity_check(const SlowFastSystem& system,
                                  const PseudoSingularity& psp,
                                  double threshold = 1e-8);

}  // namespace canard
