#include "canard/stability.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "canard/classify.hpp"
#include "canard/folded.hpp"

namespace canard {

namespace {

// Newton on (f1, ..., fk, g1); zeros coincide with the slow-time field's.
std::optional<std::vector<double>> newton_fixed_point(
    const SlowFastSystem& system, std::vector<double> state) {
    const int n = system.dim();
    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac(n, n);
    for (int iter = 0; iter < 100; ++iter) {
        for (int i = 0; i < system.k; ++i) {
            const Jet2 f = system.slow_fields[i].jet(state, system.params);
            r(i) = f.value();
            for (int j = 0; j < n; ++j) jac(i, j) = f.grad(j);
        }
        const Jet2 g = system.fast_field.jet(state, system.params);
        r(system.k) = g.value();
        for (int j = 0; j < n; ++j) jac(system.k, j) = g.grad(j);

        if (r.cwiseAbs().maxCoeff() < 1e-12) return state;
        const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) return std::nullopt;
        for (int j = 0; j < n; ++j) state[j] += step(j);
        if (std::abs(state[0]) > 1e6) return std::nullopt;
    }
    return std::nullopt;
}

Eigen::MatrixXd slow_time_jacobian(const SlowFastSystem& system,
                                   std::span<const double> state) {
    const int n = system.dim();
    Eigen::MatrixXd jac(n, n);
    for (int i = 0; i < system.k; ++i) {
        const Jet2 f = system.slow_fields[i].jet(state, system.params);
        for (int j = 0; j < n; ++j) jac(i, j) = f.grad(j);
    }
    const Jet2 g = system.fast_field.jet(state, system.params);
    for (int j = 0; j < n; ++j)
        jac(system.k, j) = g.grad(j) / system.epsilon;
    return jac;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, const char* what) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error(std::string(what) +
                                 ": no sign change over the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<std::vector<double>> find_fixed_points(
    const SlowFastSystem& system,
    const std::vector<std::vector<double>>& seeds) {
    std::vector<std::vector<double>> seed_list = seeds;
    if (seed_list.empty()) {
        const double grid[5] = {-3.0, -1.0, 0.0, 1.0, 3.0};
        std::vector<double> s(system.dim(), 0.0);
        std::function<void(int)> rec = [&](int coord) {
            if (coord == system.dim()) {
                seed_list.push_back(s);
                return;
            }
            for (double v : grid) {
                s[coord] = v;
                rec(coord + 1);
            }
        };
        rec(0);
    }

    std::vector<std::vector<double>> found;
    for (const auto& seed : seed_list) {
        auto fp = newton_fixed_point(system, seed);
        if (!fp) continue;
        bool duplicate = false;
        for (const auto& p : found) {
            double d = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
                d = std::max(d, std::abs(p[i] - (*fp)[i]));
            if (d < 1e-6) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) found.push_back(std::move(*fp));
    }
    return found;
}

std::vector<double> characteristic_polynomial(
    const SlowFastSystem& system, std::span<const double> fixed_point) {
    for (int i = 0; i < system.k; ++i)
        if (std::abs(system.slow_fields[i](fixed_point, system.params)) > 1e-8)
            throw std::invalid_argument(
                "characteristic_polynomial: not a fixed point");
    if (std::abs(system.fast_field(fixed_point, system.params)) > 1e-8)
        throw std::invalid_argument(
            "characteristic_polynomial: not a fixed point");

    const int n = system.dim();
    const Eigen::MatrixXd jac = slow_time_jacobian(system, fixed_point);
    Matrix m(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = jac(i, j);

    // det(lambda I - J) has alternating principal-minor sums as
    // coefficients; the whole polynomial is weighted by epsilon so the
    // leading coefficient is epsilon itself.
    std::vector<double> coeffs(n + 1);
    coeffs[n] = system.epsilon;
    for (int order = 1; order <= n; ++order)
        coeffs[n - order] = system.epsilon *
                            ((order % 2) ? -1.0 : 1.0) *
                            principal_minor_sum(m, order);
    return coeffs;
}

RouthHurwitzReport routh_hurwitz(std::vector<double> coefficients,
                                 double marginal_band) {
    const int degree = static_cast<int>(coefficients.size()) - 1;
    if (degree != 3 && degree != 4)
        throw std::invalid_argument("routh_hurwitz: degree must be 3 or 4");
    // normalize the leading coefficient positive; a sign-definite
    // polynomial is unchanged as a root locus
    if (coefficients[degree] < 0.0)
        for (auto& c : coefficients) c = -c;

    RouthHurwitzReport rep;
    rep.coefficients = coefficients;
    const auto& a = rep.coefficients;
    rep.d1 = a[1];
    rep.d2 = a[1] * a[2] - a[0] * a[3];
    std::vector<double> tested = {a[0], rep.d1, rep.d2};
    if (degree == 4) {
        rep.d3 = a[1] * a[2] * a[3] - a[0] * a[3] * a[3] - a[1] * a[1] * a[4];
        tested.push_back(*rep.d3);
    }

    bool all_positive = true;
    bool marginal = false;
    for (double q : tested) {
        if (std::abs(q) <= marginal_band) marginal = true;
        if (q <= 0.0) all_positive = false;
    }
    rep.flag = marginal ? StabilityFlag::Marginal
               : all_positive ? StabilityFlag::Stable
                              : StabilityFlag::Unstable;
    return rep;
}

HopfResult hopf_parameter(const SlowFastSystem& system,
                          const std::string& duck_parameter_name,
                          double bracket_low, double bracket_high,
                          double tol) {
    // pick the tracked fixed point at the lower end of the bracket,
    // nudging inward if the system degenerates exactly at the endpoint
    std::vector<double> tracked;
    double low = bracket_low;
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            const auto fps = find_fixed_points(
                system.with_param(duck_parameter_name, low));
            if (!fps.empty()) {
                // track the largest-norm fixed point (the origin is never
                // the one undergoing the Hopf bifurcation when a nonzero
                // branch exists)
                tracked = fps.front();
                double best = -1.0;
                for (const auto& fp : fps) {
                    double n = 0.0;
                    for (double v : fp) n = std::max(n, std::abs(v));
                    if (n > best) {
                        best = n;
                        tracked = fp;
                    }
                }
                break;
            }
        } catch (const std::exception&) {
        }
        low += 1e-6 * (bracket_high - bracket_low);
    }
    if (tracked.empty())
        throw std::runtime_error("hopf_parameter: no fixed point at bracket");

    auto determinant_at = [&](double value) {
        const SlowFastSystem sys = system.with_param(duck_parameter_name, value);
        auto fp = newton_fixed_point(sys, tracked);
        if (!fp) {
            // continuation can overshoot near a degenerate parameter value;
            // re-anchor on the nearest fixed point found afresh
            const auto fps = find_fixed_points(sys);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : fps) {
                double dist = 0.0;
                for (std::size_t j = 0; j < q.size(); ++j)
                    dist += (q[j] - tracked[j]) * (q[j] - tracked[j]);
                if (dist < best) {
                    best = dist;
                    fp = q;
                }
            }
            if (!fp)
                throw std::runtime_error(
                    "hopf_parameter: lost the tracked fixed point");
        }
        tracked = *fp;
        const auto rh = routh_hurwitz(characteristic_polynomial(sys, *fp));
        return system.k == 2 ? rh.d2 : *rh.d3;
    };

    // Hopf certificate: a complex pair with near-zero real part
    auto certify = [&](double value) {
        HopfResult result;
        result.value = value;
        const SlowFastSystem sys =
            system.with_param(duck_parameter_name, value);
        const auto fp = newton_fixed_point(sys, tracked);
        if (fp) {
            const Eigen::MatrixXd jac = slow_time_jacobian(sys, *fp);
            const Eigen::EigenSolver<Eigen::MatrixXd> solver(jac);
            for (int i = 0; i < jac.rows(); ++i) {
                if (std::abs(solver.eigenvalues()(i).imag()) > 1e-8) {
                    result.pair_real_part = solver.eigenvalues()(i).real();
                    result.certified = std::abs(result.pair_real_part) < 1e-4;
                    break;
                }
            }
        }
        return result;
    };

    // The determinant can vanish more than once in the bracket (it is also
    // zero when two real eigenvalues sum to zero), so scan for every sign
    // change and keep the root certified by a pure-imaginary pair.
    const int n_scan = 400;
    std::optional<HopfResult> fallback;
    double prev_v = low;
    double prev_d = determinant_at(low);
    std::vector<double> prev_tracked = tracked;
    for (int i = 1; i <= n_scan; ++i) {
        const double v = low + (bracket_high - low) * i / n_scan;
        const double d = determinant_at(v);
        if (prev_d == 0.0 || (prev_d > 0.0) != (d > 0.0)) {
            tracked = prev_tracked;
            const double root =
                prev_d == 0.0
                    ? prev_v
                    : bisect(determinant_at, prev_v, v, tol, "hopf_parameter");
            HopfResult candidate = certify(root);
            if (candidate.certified) return candidate;
            if (!fallback) fallback = candidate;
        }
        prev_v = v;
        prev_d = d;
        prev_tracked = tracked;
    }
    if (fallback) return *fallback;
    throw std::runtime_error("hopf_parameter: no sign change over the bracket");
}

double sigma2_of_parameter(const SlowFastSystem& system,
                           const std::string& parameter_name, double value) {
    const SlowFastSystem sys = system.with_param(parameter_name, value);
    if (sys.k == 2) {
        const auto psps =
            find_pseudo_singular_points(sys, {}, 1e-10,
                                        /*include_equilibria=*/true);
        if (psps.empty())
            throw std::runtime_error(
                "sigma2_of_parameter: no pseudo-singular point");
        return classify_folded_singularity(sys, psps.front()).sigma2;
    }
    const auto psp = pseudo_singular_manifold(sys, 1, 0.0,
                                              PseudoSingularity::Branch::Plus);
    return classify_folded_singularity(sys, psp).sigma2;
}

CanardWindow canard_window(const SlowFastSystem& system,
                           const std::string& duck_parameter_name,
                           double scan_bound) {
    CanardWindow window;
    window.duck_parameter_name = duck_parameter_name;

    if (system.saddle_node_closed_form &&
        duck_parameter_name == system.duck_parameter) {
        window.saddle_node_value = system.saddle_node_closed_form(system.params);
    } else {
        window.saddle_node_value = bisect(
            [&](double v) {
                return sigma2_of_parameter(system, duck_parameter_name, v);
            },
            -scan_bound, scan_bound, 1e-10, "canard_window saddle-node");
    }

    if (system.k == 2) {
        const auto hopf = hopf_parameter(system, duck_parameter_name,
                                         window.saddle_node_value + 1e-3,
                                         scan_bound);
        window.hopf_value = hopf.value;
        window.window_low = hopf.value;
        window.window_high = scan_bound;  // no printed upper bound in 3D
    } else {
        const auto hopf = hopf_parameter(system, duck_parameter_name, 1e-4,
                                         window.saddle_node_value);
        window.hopf_value = hopf.value;
        window.window_low = hopf.value;
        window.window_high = window.saddle_node_value;
    }
    return window;
}

double SaddleRegion::line_plus(double x2, double alpha2) const {
    const double t = 2.0 * c2 / 3.0;
    return alpha2 * (t + 1.0) * s + x2 + t * s;
}

double SaddleRegion::line_minus(double x2, double alpha2) const {
    const double t = 2.0 * c2 / 3.0;
    return -alpha2 * (t + 1.0) * s + x2 - t * s;
}

bool SaddleRegion::contains(double x2, double alpha2) const {
    return line_plus(x2, alpha2) < 0.0 && line_minus(x2, alpha2) > 0.0;
}

double SaddleRegion::alpha2_intercept() const {
    return -2.0 * c2 / (2.0 * c2 + 3.0);
}

double SaddleRegion::x2_intercept_plus() const { return -2.0 * c2 / 3.0 * s; }
double SaddleRegion::x2_intercept_minus() const { return 2.0 * c2 / 3.0 * s; }

SaddleRegion saddle_region(double c1, double c2) {
    if (c1 <= 0.0 || c2 >= 0.0)
        throw std::invalid_argument("saddle_region: requires c1 > 0, c2 < 0");
    SaddleRegion region;
    region.c1 = c1;
    region.c2 = c2;
    region.s = std::sqrt(-c2 / (3.0 * c1));
    return region;
}

}  // namespace canard
