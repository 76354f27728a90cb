#include "canard/folded.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace canard {

namespace {

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double slow_field_norm(const SlowFastSystem& system,
                       std::span<const double> state) {
    double n2 = 0.0;
    for (int i = 0; i < system.k; ++i) {
        const double f = system.slow_fields[i](state, system.params);
        n2 += f * f;
    }
    return std::sqrt(n2);
}

// Residuals and their Jacobian with respect to the coordinates listed in
// `unknowns`, assembled from second-order jets of g1 and first-order data
// of the fi.
void residuals_and_jacobian(const SlowFastSystem& system,
                            std::span<const double> state,
                            std::span<const int> unknowns,
                            Eigen::Vector3d& r, Eigen::Matrix3d& jac) {
    const int y = system.k;
    const Jet2 g = system.fast_field.jet(state, system.params);
    std::vector<Jet2> f(system.k);
    for (int i = 0; i < system.k; ++i)
        f[i] = system.slow_fields[i].jet(state, system.params);

    r(0) = g.value();
    r(1) = g.grad(y);
    r(2) = 0.0;
    for (int i = 0; i < system.k; ++i) r(2) += g.grad(i) * f[i].value();

    for (int c = 0; c < 3; ++c) {
        const int j = unknowns[c];
        jac(0, c) = g.grad(j);
        jac(1, c) = g.hess(y, j);
        double s = 0.0;
        for (int i = 0; i < system.k; ++i)
            s += g.hess(i, j) * f[i].value() + g.grad(i) * f[i].grad(j);
        jac(2, c) = s;
    }
}

double residual_norm(const Eigen::Vector3d& r) {
    return r.cwiseAbs().maxCoeff();
}

bool newton_solve(const SlowFastSystem& system, std::vector<double>& state,
                  std::span<const int> unknowns, double tol) {
    Eigen::Vector3d r;
    Eigen::Matrix3d jac;
    for (int iter = 0; iter < 80; ++iter) {
        residuals_and_jacobian(system, state, unknowns, r, jac);
        const double norm = residual_norm(r);
        if (norm < tol) return true;
        const Eigen::Vector3d step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) return false;

        double lambda = 1.0;
        std::vector<double> trial = state;
        for (int halve = 0; halve < 30; ++halve) {
            for (int c = 0; c < 3; ++c)
                trial[unknowns[c]] = state[unknowns[c]] + lambda * step(c);
            Eigen::Vector3d rt;
            Eigen::Matrix3d jt;
            residuals_and_jacobian(system, trial, unknowns, rt, jt);
            if (residual_norm(rt) < norm) break;
            lambda *= 0.5;
        }
        state = trial;
    }
    residuals_and_jacobian(system, state, unknowns, r, jac);
    return residual_norm(r) < tol;
}

std::vector<std::vector<double>> default_seeds(const SlowFastSystem& system) {
    // fold-curve-flavoured seeding: sweep the fast coordinate and the free
    // slow coordinate(s), leave x1 at 0 (Newton recovers it quickly since
    // g1 is usually well conditioned in x1)
    std::vector<std::vector<double>> seeds;
    const double grid[5] = {-2.5, -1.0, 0.3, 1.0, 2.5};
    for (double x2 : grid)
        for (double y1 : grid) {
            std::vector<double> s(system.dim(), 0.0);
            s[1] = x2;
            s[system.k] = y1;
            seeds.push_back(std::move(s));
        }
    return seeds;
}

}  // namespace

std::vector<double> pseudo_singular_residuals(const SlowFastSystem& system,
                                              std::span<const double> state) {
    const Jet2 g = system.fast_field.jet(state, system.params);
    double g1_dot = 0.0;
    for (int i = 0; i < system.k; ++i)
        g1_dot += g.grad(i) * system.slow_fields[i](state, system.params);
    return {g.value(), g.grad(system.k), g1_dot};
}

std::vector<PseudoSingularity> find_pseudo_singular_points(
    const SlowFastSystem& system, const std::vector<std::vector<double>>& seeds,
    double residual_tol, bool include_equilibria) {
    if (system.k != 2)
        throw std::invalid_argument(
            "find_pseudo_singular_points: requires k = 2");
    const std::vector<int> unknowns = {0, 1, 2};
    const auto& seed_list = seeds.empty() ? default_seeds(system) : seeds;

    std::vector<PseudoSingularity> found;
    for (const auto& seed : seed_list) {
        std::vector<double> state = seed;
        if (!newton_solve(system, state, unknowns, residual_tol)) continue;
        if (!include_equilibria && slow_field_norm(system, state) < 1e-8)
            continue;  // full fixed point
        bool duplicate = false;
        for (const auto& p : found)
            if (max_norm_distance(p.state, state) < 1e-6) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        PseudoSingularity psp;
        psp.state = std::move(state);
        psp.sign_branch = psp.state[system.k] >= 0.0
                              ? PseudoSingularity::Branch::Plus
                              : PseudoSingularity::Branch::Minus;
        found.push_back(std::move(psp));
    }
    return found;
}

PseudoSingularity pseudo_singular_manifold(
    const SlowFastSystem& system, int free_index, double free_value,
    std::optional<PseudoSingularity::Branch> branch, double residual_tol) {
    if (system.k != 3)
        throw std::invalid_argument("pseudo_singular_manifold: requires k = 3");
    if (free_index < 0 || free_index >= system.dim())
        throw std::invalid_argument("pseudo_singular_manifold: bad free index");

    std::vector<int> unknowns;
    for (int i = 0; i < system.dim(); ++i)
        if (i != free_index) unknowns.push_back(i);

    const double grid[6] = {-2.5, -1.0, -0.3, 0.3, 1.0, 2.5};
    for (double y1 : grid) {
        std::vector<double> state(system.dim(), 0.0);
        state[free_index] = free_value;
        if (free_index != system.k) state[system.k] = y1;
        if (newton_solve(system, state, unknowns, residual_tol)) {
            PseudoSingularity psp;
            psp.state = std::move(state);
            psp.free_index = free_index;
            psp.sign_branch = psp.state[system.k] >= 0.0
                                  ? PseudoSingularity::Branch::Plus
                                  : PseudoSingularity::Branch::Minus;
            if (branch && psp.sign_branch != *branch) continue;
            return psp;
        }
    }
    throw std::runtime_error(
        "pseudo_singular_manifold: Newton did not converge from any seed");
}

GenericityReport genericity_check(const SlowFastSystem& system,
                                  const PseudoSingularity& psp,
                                  double threshold) {
    const Jet2 g = system.fast_field.jet(psp.state, system.params);
    GenericityReport rep;
    rep.f2_value = system.slow_fields[1](psp.state, system.params);
    rep.dg1_dx1 = g.grad(0);
    rep.d2g1_dy1sq = g.hess(system.k, system.k);
    rep.all_pass = std::abs(rep.f2_value) > threshold &&
                   std::abs(rep.dg1_dx1) > threshold &&
                   std::abs(rep.d2g1_dy1sq) > threshold;
    return rep;
}

}  // namespace canard
