#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "canard/folded.hpp"
#include "canard/system.hpp"

namespace canard {

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double max_error_estimate = 0.0;
    bool truncated = false;  // divergence or step-size underflow
    std::string truncation_reason;
};

struct IntegrateOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double sample_dt = 0.0;  // 0: record accepted steps only
    double max_step = 0.0;   // 0: no cap
};

/// Adaptive embedded Dormand-Prince RK4(5) on the slow-time system, with
/// dense output by cubic Hermite interpolation at `sample_dt` spacing.
Trajectory integrate(const SlowFastSystem& system,
                     std::vector<double> initial_state, double t_final,
                     const IntegrateOptions& options = {});

struct CanardSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    bool repelling = false;
    double mean_abs_g1 = 0.0;
};

struct CanardSegments {
    std::vector<CanardSegment> segments;
    double repelling_time = 0.0;  // total slow time on the repelling branch
};

/// Labels near-manifold samples (|g1| < delta) by the sign of dg1/dy1:
/// negative = attracting sheet, positive = repelling sheet.
CanardSegments detect_canard(const Trajectory& trajectory,
                             const SlowFastSystem& system, double delta = 0.05);

struct PlotBundle {
    ManifoldMesh manifold;
    const Trajectory* trajectory = nullptr;
    std::vector<PseudoSingularity> markers;
};

PlotBundle emit_manifold_and_orbit(
    const SlowFastSystem& system, const Trajectory& trajectory,
    const std::vector<std::pair<double, double>>& ranges,
    const std::vector<int>& resolution);

/// CSV writers: trajectory header `t,x1,x2[,x3],y1`; mesh rows
/// `x1,x2[,x3],y1` in row-major grid order.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          int slow_dim);
void write_mesh_csv(std::ostream& out, const ManifoldMesh& mesh, int slow_dim);

/// Offsets a pseudo-singularity slightly along the attracting-sheet normal,
/// the default canard initial condition.
std::vector<double> canard_initial_state(const SlowFastSystem& system,
                                         const PseudoSingularity& psp,
                                         double offset = 1e-3);

}  // namespace canard
