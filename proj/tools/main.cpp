#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canard/characteristic.hpp"
#include "canard/circuits.hpp"
#include "canard/classify.hpp"
#include "canard/folded.hpp"
#include "canard/report.hpp"
#include "canard/simulate.hpp"
#include "canard/stability.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

canard::SlowFastSystem load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return canard::system_from_json(buffer.str());
}

canard::PseudoSingularity default_psp(const canard::SlowFastSystem& system) {
    if (system.k == 2) {
        auto points = canard::find_pseudo_singular_points(system);
        if (points.empty())
            throw std::runtime_error("no pseudo-singular point found");
        return points.front();
    }
    return canard::pseudo_singular_manifold(
        system, 1, 0.0, canard::PseudoSingularity::Branch::Plus);
}

int cmd_fit(double a, double b, double d) {
    const canard::CubicFit fit = canard::fit_cubic(a, b, d);
    json out{{"schema", 1},      {"a", fit.a},   {"b", fit.b},
             {"d", fit.d},       {"c1", fit.c1}, {"c2", fit.c2},
             {"residual", fit.residual}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& config_path, double* duck_override,
                const canard::AnalyzeOptions& options,
                const std::string& out_dir) {
    canard::SlowFastSystem system = load_config(config_path);
    if (duck_override) {
        if (system.duck_parameter.empty())
            throw std::invalid_argument("system has no duck parameter");
        system.params[system.duck_parameter] = *duck_override;
    }
    const json report = canard::analysis_report(system, options);
    std::cout << report.dump(2) << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / "analysis.json");
        f << report.dump(2) << "\n";
    }
    return report["failures"].empty() ? kExitOk : kExitSolver;
}

int cmd_sweep(const std::string& config_path, std::string parameter,
              double low, double high, int steps, std::ostream& out) {
    canard::SlowFastSystem base = load_config(config_path);
    if (parameter.empty()) parameter = base.duck_parameter;
    if (parameter.empty())
        throw std::invalid_argument("no sweep parameter given");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");

    const bool has_d3 = base.k == 3;
    out << "parameter,D1,D2" << (has_d3 ? ",D3" : "")
        << ",sigma2,stable-flag\n";
    const int count = (low == high) ? 1 : steps;
    for (int i = 0; i < count; ++i) {
        const double value =
            count == 1 ? low : low + (high - low) * i / (count - 1);
        const canard::SlowFastSystem system = base.with_param(parameter, value);

        // track the fixed point with the largest norm (nonzero branch when
        // one exists, otherwise the origin)
        const auto fixed_points = canard::find_fixed_points(system);
        std::vector<double> tracked(system.dim(), 0.0);
        double best = -1.0;
        for (const auto& fp : fixed_points) {
            double norm = 0.0;
            for (double v : fp) norm += v * v;
            if (norm > best) {
                best = norm;
                tracked = fp;
            }
        }
        const auto rh = canard::routh_hurwitz(
            canard::characteristic_polynomial(system, tracked));

        double sigma2 = std::numeric_limits<double>::quiet_NaN();
        try {
            sigma2 = canard::sigma2_of_parameter(base, parameter, value);
        } catch (const std::exception&) {
            // leave NaN: no pseudo-singularity at this parameter value
        }

        out << fmt17(value) << ',' << fmt17(rh.d1) << ',' << fmt17(rh.d2);
        if (has_d3) out << ',' << fmt17(rh.d3.value_or(0.0));
        out << ',' << fmt17(sigma2) << ','
            << (rh.flag == canard::StabilityFlag::Stable     ? "stable"
                : rh.flag == canard::StabilityFlag::Unstable ? "unstable"
                                                             : "marginal")
            << '\n';
    }
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, double t_final,
                 const std::string& out_dir,
                 const std::vector<double>& initial, double delta,
                 double offset, const canard::IntegrateOptions& options) {
    const canard::SlowFastSystem system = load_config(config_path);
    std::vector<double> start = initial;
    if (start.empty())
        start = canard::canard_initial_state(system, default_psp(system),
                                             offset);
    if (static_cast<int>(start.size()) != system.dim())
        throw std::invalid_argument("initial state has wrong dimension");

    const canard::Trajectory traj =
        canard::integrate(system, start, t_final, options);
    const canard::CanardSegments segments =
        canard::detect_canard(traj, system, delta);

    std::vector<std::pair<double, double>> ranges(system.k, {-2.0, 2.0});
    std::vector<int> resolution(system.k, system.k == 2 ? 41 : 15);
    const canard::PlotBundle bundle =
        canard::emit_manifold_and_orbit(system, traj, ranges, resolution);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream f(fs::path(out_dir) / "trajectory.csv");
        canard::write_trajectory_csv(f, traj, system.k);
    }
    {
        std::ofstream f(fs::path(out_dir) / "manifold.csv");
        canard::write_mesh_csv(f, bundle.manifold, system.k);
    }
    {
        std::ofstream f(fs::path(out_dir) / "markers.csv");
        f << "x1,x2" << (system.k == 3 ? ",x3" : "") << ",y1\n";
        for (const auto& m : bundle.markers) {
            for (std::size_t i = 0; i < m.state.size(); ++i)
                f << (i ? "," : "") << fmt17(m.state[i]);
            f << '\n';
        }
    }
    if (system.k == 3) {
        // figure projections: (x1, x3, y1) and (x1, y1)
        std::ofstream f3(fs::path(out_dir) / "projection_x1_x3_y1.csv");
        f3 << "x1,x3,y1\n";
        std::ofstream f2(fs::path(out_dir) / "projection_x1_y1.csv");
        f2 << "x1,y1\n";
        for (const auto& s : traj.states) {
            f3 << fmt17(s[0]) << ',' << fmt17(s[2]) << ',' << fmt17(s[3])
               << '\n';
            f2 << fmt17(s[0]) << ',' << fmt17(s[3]) << '\n';
        }
    }

    json report{{"schema", 1},
                {"initial_state", start},
                {"t_final", t_final},
                {"accepted_steps", traj.accepted_steps},
                {"rejected_steps", traj.rejected_steps},
                {"truncated", traj.truncated},
                {"delta", delta},
                {"repelling_time", segments.repelling_time}};
    if (traj.truncated) report["truncation_reason"] = traj.truncation_reason;
    report["segments"] = json::array();
    for (const auto& seg : segments.segments)
        report["segments"].push_back(
            json{{"t_start", seg.t_start},
                 {"t_end", seg.t_end},
                 {"branch", seg.repelling ? "repelling" : "attracting"},
                 {"mean_abs_g1", seg.mean_abs_g1}});
    std::cout << report.dump(2) << "\n";
    {
        std::ofstream f(fs::path(out_dir) / "canard.json");
        f << report.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_region(double c1, double c2,
               const std::vector<std::string>& probes) {
    const canard::SaddleRegion region = canard::saddle_region(c1, c2);
    json out{{"schema", 1},
             {"c1", c1},
             {"c2", c2},
             {"s", region.s},
             {"alpha2_intercept", region.alpha2_intercept()},
             {"x2_intercept_plus", region.x2_intercept_plus()},
             {"x2_intercept_minus", region.x2_intercept_minus()}};
    out["probes"] = json::array();
    for (const auto& probe : probes) {
        const auto comma = probe.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("probe must be x2,alpha2: " + probe);
        const double x2 = std::stod(probe.substr(0, comma));
        const double alpha2 = std::stod(probe.substr(comma + 1));
        const double plus = region.line_plus(x2, alpha2);
        const double minus = region.line_minus(x2, alpha2);
        const bool boundary =
            std::abs(plus) < 1e-9 || std::abs(minus) < 1e-9;
        out["probes"].push_back(
            json{{"x2", x2},
                 {"alpha2", alpha2},
                 {"line_plus", plus},
                 {"line_minus", minus},
                 {"classification", boundary ? "boundary"
                                    : region.contains(x2, alpha2)
                                        ? "inside"
                                        : "outside"}});
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Canard-existence analysis for slow-fast memristor Chua circuits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tol_residual = 1e-10;
    canard::IntegrateOptions integrate_options;
    app.add_option("--config", config_path, "JSON system descriptor")
        ->configurable(false);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized suites (unused here)");
    app.add_option("--tol-residual", tol_residual,
                   "pseudo-singularity residual tolerance");
    app.add_option("--tol-rel", integrate_options.rel_tol,
                   "integrator relative tolerance");
    app.add_option("--tol-abs", integrate_options.abs_tol,
                   "integrator absolute tolerance");

    auto* fit = app.add_subcommand("fit", "least-squares cubic memristor fit");
    double fa = 0, fb = 0, fd = 0;
    fit->add_option("--a", fa, "inner slope")->required();
    fit->add_option("--b", fb, "outer slope")->required();
    fit->add_option("--d", fd, "half-width of the fit interval")->required();

    auto* analyze =
        app.add_subcommand("analyze", "full canard-existence report");
    double duck_override = 0.0;
    bool has_duck = false;
    double scan_bound = 1.0;
    double free_value = 0.0;
    analyze->add_option("--duck", duck_override, "duck-parameter override")
        ->each([&](const std::string&) { has_duck = true; });
    analyze->add_option("--scan-bound", scan_bound,
                        "upper cap for one-sided canard windows");
    analyze->add_option("--free-value", free_value,
                        "pinned free coordinate (4D)");

    auto* sweep =
        app.add_subcommand("sweep", "Routh-Hurwitz / sigma2 parameter sweep");
    std::string sweep_parameter;
    double sweep_low = 0.0, sweep_high = 0.0;
    int sweep_steps = 101;
    sweep->add_option("--parameter", sweep_parameter,
                      "parameter name (default: duck parameter)");
    sweep->add_option("--min", sweep_low, "range start")->required();
    sweep->add_option("--max", sweep_high, "range end")->required();
    sweep->add_option("--steps", sweep_steps, "number of samples");

    auto* simulate = app.add_subcommand("simulate", "integrate and detect canards");
    double t_final = 100.0;
    double delta = 0.05;
    double offset = 1e-3;
    std::vector<double> initial;
    simulate->add_option("--t-final", t_final, "slow-time horizon");
    simulate->add_option("--delta", delta, "manifold-proximity threshold");
    simulate->add_option("--offset", offset,
                         "initial offset from the pseudo-singular point");
    simulate->add_option("--initial", initial,
                         "initial state (default: offset pseudo-singularity)");
    simulate->add_option("--sample-dt", integrate_options.sample_dt,
                         "dense-output spacing (0: accepted steps)");

    auto* region = app.add_subcommand("region", "4D saddle-region geometry");
    double rc1 = 0, rc2 = 0;
    std::vector<std::string> probes;
    region->add_option("--c1", rc1, "cubic coefficient")->required();
    region->add_option("--c2", rc2, "linear coefficient")->required();
    region->add_option("--probe", probes, "x2,alpha2 membership probe");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit) return cmd_fit(fa, fb, fd);
        if (*analyze) {
            canard::AnalyzeOptions options;
            options.scan_bound = scan_bound;
            options.free_value = free_value;
            options.residual_tol = tol_residual;
            return cmd_analyze(config_path, has_duck ? &duck_override : nullptr,
                               options, out_dir);
        }
        if (*sweep)
            return cmd_sweep(config_path, sweep_parameter, sweep_low,
                             sweep_high, sweep_steps, std::cout);
        if (*simulate)
            return cmd_simulate(config_path, t_final,
                                out_dir.empty() ? "." : out_dir, initial,
                                delta, offset, integrate_options);
        if (*region) return cmd_region(rc1, rc2, probes);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
