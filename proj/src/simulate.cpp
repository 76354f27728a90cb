#include "canard/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace canard {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0,
                          1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0}};
constexpr double kB5[7] = {35.0 / 384.0,     0.0,  500.0 / 1113.0,
                           125.0 / 192.0,    -2187.0 / 6784.0,
                           11.0 / 84.0,      0.0};
constexpr double kB4[7] = {5179.0 / 57600.0,  0.0,   7571.0 / 16695.0,
                           393.0 / 640.0,     -92097.0 / 339200.0,
                           187.0 / 2100.0,    1.0 / 40.0};

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
}

}  // namespace

Trajectory integrate(const SlowFastSystem& system,
                     std::vector<double> initial_state, double t_final,
                     const IntegrateOptions& options) {
    const int n = system.dim();
    Trajectory traj;
    if (static_cast<int>(initial_state.size()) != n)
        throw std::invalid_argument("integrate: state dimension mismatch");
    if (t_final < 0.0 || options.rel_tol <= 0.0 || options.abs_tol <= 0.0)
        throw std::invalid_argument("integrate: bad arguments");

    auto rhs = [&](const std::vector<double>& y) {
        return eval_rhs(system, y, TimeScale::Slow);
    };

    double t = 0.0;
    std::vector<double> y = std::move(initial_state);
    std::vector<double> dy = rhs(y);

    traj.times.push_back(t);
    traj.states.push_back(y);
    if (t_final == 0.0) return traj;

    double next_sample =
        options.sample_dt > 0.0 ? options.sample_dt : 0.0;
    double h = std::min(1e-3, t_final);
    if (options.max_step > 0.0) h = std::min(h, options.max_step);

    std::vector<std::vector<double>> k(7, std::vector<double>(n));
    std::vector<double> y_trial(n), y_low(n);

    while (t < t_final) {
        h = std::min(h, t_final - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            traj.truncated = true;
            traj.truncation_reason = "step-size underflow (stiffness limit)";
            break;
        }

        k[0] = dy;
        bool finite = true;
        for (int stage = 1; stage < 7 && finite; ++stage) {
            for (int i = 0; i < n; ++i) {
                double acc = y[i];
                for (int s = 0; s < stage; ++s)
                    acc += h * kA[stage][s] * k[s][i];
                y_trial[i] = acc;
            }
            k[stage] = rhs(y_trial);
            finite = all_finite(k[stage]);
        }
        if (!finite) {
            traj.truncated = true;
            traj.truncation_reason = "non-finite state";
            break;
        }

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            double y5 = y[i], y4 = y[i];
            for (int s = 0; s < 7; ++s) {
                y5 += h * kB5[s] * k[s][i];
                y4 += h * kB4[s] * k[s][i];
            }
            y_trial[i] = y5;
            y_low[i] = y4;
            const double scale =
                options.abs_tol +
                options.rel_tol * std::max(std::abs(y[i]), std::abs(y5));
            const double e = (y5 - y4) / scale;
            err += e * e;
        }
        err = std::sqrt(err / n);
        traj.max_error_estimate = std::max(traj.max_error_estimate, err);

        if (err <= 1.0) {
            const double t_new = t + h;
            // k[6] is the derivative at the new point (FSAL)
            if (options.sample_dt > 0.0) {
                while (next_sample <= t_new + 1e-15 && next_sample <= t_final) {
                    const double theta = (next_sample - t) / h;
                    std::vector<double> sample(n);
                    for (int i = 0; i < n; ++i) {
                        // cubic Hermite between (y, dy) and (y_trial, k6)
                        const double h00 =
                            (1.0 + 2.0 * theta) * (1.0 - theta) * (1.0 - theta);
                        const double h10 = theta * (1.0 - theta) * (1.0 - theta);
                        const double h01 = theta * theta * (3.0 - 2.0 * theta);
                        const double h11 = theta * theta * (theta - 1.0);
                        sample[i] = h00 * y[i] + h10 * h * dy[i] +
                                    h01 * y_trial[i] + h11 * h * k[6][i];
                    }
                    traj.times.push_back(next_sample);
                    traj.states.push_back(std::move(sample));
                    next_sample += options.sample_dt;
                }
            } else {
                traj.times.push_back(t_new);
                traj.states.push_back(y_trial);
            }
            t = t_new;
            y = y_trial;
            dy = k[6];
            traj.accepted_steps++;
        } else {
            traj.rejected_steps++;
        }

        const double factor =
            0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (options.max_step > 0.0) h = std::min(h, options.max_step);
        if (!all_finite(y)) {
            traj.truncated = true;
            traj.truncation_reason = "non-finite state";
            break;
        }
    }
    return traj;
}

CanardSegments detect_canard(const Trajectory& trajectory,
                             const SlowFastSystem& system, double delta) {
    CanardSegments result;
    CanardSegment open;
    bool has_open = false;
    double sum_abs_g = 0.0;
    std::size_t count = 0;
    double prev_t = 0.0;
    bool prev_near = false;
    bool prev_repelling = false;

    auto close_segment = [&]() {
        if (!has_open) return;
        open.mean_abs_g1 = count ? sum_abs_g / count : 0.0;
        result.segments.push_back(open);
        has_open = false;
    };

    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        const auto& state = trajectory.states[i];
        const double t = trajectory.times[i];
        const double g = critical_residual(system, state);
        bool near = std::abs(g) < delta;
        bool repelling = false;
        if (near) {
            // Normal hyperbolicity breaks in an O(sqrt(eps)) neighborhood of
            // the fold; a transversal fold crossing lingers there with small
            // |g1| without tracking either sheet. Count a sample as on the
            // repelling sheet only past that neighborhood, so such crossings
            // do not register as canard passage.
            const double margin = std::sqrt(system.epsilon);
            const Jet2 gj = system.fast_field.jet(state, system.params);
            const double dg_dy = gj.grad(system.k);
            if (dg_dy > margin)
                repelling = true;
            else if (dg_dy >= 0.0)
                near = false;
        }

        if (near && has_open && repelling == prev_repelling) {
            open.t_end = t;
            sum_abs_g += std::abs(g);
            ++count;
            if (repelling && prev_near) result.repelling_time += t - prev_t;
        } else {
            close_segment();
            if (near) {
                open = CanardSegment{t, t, repelling, 0.0};
                has_open = true;
                sum_abs_g = std::abs(g);
                count = 1;
            }
        }
        prev_t = t;
        prev_near = near;
        prev_repelling = repelling;
    }
    close_segment();
    return result;
}

PlotBundle emit_manifold_and_orbit(
    const SlowFastSystem& system, const Trajectory& trajectory,
    const std::vector<std::pair<double, double>>& ranges,
    const std::vector<int>& resolution) {
    PlotBundle bundle;
    bundle.manifold = sample_critical_manifold(system, ranges, resolution);
    bundle.trajectory = &trajectory;
    if (system.k == 2) {
        bundle.markers = find_pseudo_singular_points(system);
    } else {
        for (auto branch : {PseudoSingularity::Branch::Plus,
                            PseudoSingularity::Branch::Minus}) {
            try {
                bundle.markers.push_back(
                    pseudo_singular_manifold(system, 1, 0.0, branch));
            } catch (const std::exception&) {
                // marker is cosmetic; skip silently if the solve fails
            }
        }
    }
    return bundle;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          int slow_dim) {
    out << "t,x1,x2";
    if (slow_dim == 3) out << ",x3";
    out << ",y1\n";
    out.precision(17);
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        out << trajectory.times[i];
        for (double v : trajectory.states[i]) out << ',' << v;
        out << '\n';
    }
}

void write_mesh_csv(std::ostream& out, const ManifoldMesh& mesh,
                    int slow_dim) {
    out << "x1,x2";
    if (slow_dim == 3) out << ",x3";
    out << ",y1\n";
    out.precision(17);
    for (const auto& state : mesh.states) {
        for (std::size_t i = 0; i < state.size(); ++i)
            out << (i ? "," : "") << state[i];
        out << '\n';
    }
}

std::vector<double> canard_initial_state(const SlowFastSystem& system,
                                         const PseudoSingularity& psp,
                                         double offset) {
    // move the fast coordinate toward the attracting sheet (dg1/dy1 < 0)
    // and project back onto M0 by a short Newton solve in x1
    std::vector<double> state = psp.state;
    const int y = system.k;
    for (double sign : {1.0, -1.0}) {
        std::vector<double> trial = psp.state;
        trial[y] += sign * offset;
        const Jet2 g = system.fast_field.jet(trial, system.params);
        if (g.grad(y) < 0.0) {
            state = trial;
            break;
        }
    }
    for (int iter = 0; iter < 50; ++iter) {
        const Jet2 g = system.fast_field.jet(state, system.params);
        if (std::abs(g.value()) < 1e-12) break;
        if (g.grad(0) == 0.0) break;
        state[0] -= g.value() / g.grad(0);
    }
    return state;
}

}  // namespace canard
