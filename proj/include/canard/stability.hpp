#pragma once

#include <optional>
#include <string>
#include <vector>

#include "canard/system.hpp"

namespace canard {

enum class StabilityFlag { Stable, Unstable, Marginal };

struct RouthHurwitzReport {
    std::vector<double> coefficients;  // a0 ... an, ascending, a0 > 0
    double d1 = 0.0;
    double d2 = 0.0;
    std::optional<double> d3;  // degree 4 only
    StabilityFlag flag = StabilityFlag::Marginal;

    bool stable() const { return flag == StabilityFlag::Stable; }
};

struct CanardWindow {
    std::string duck_parameter_name;
    double saddle_node_value = 0.0;
    double hopf_value = 0.0;
    double window_low = 0.0;
    double window_high = 0.0;
    bool contains(double v) const { return v > window_low && v < window_high; }
};

/// Saddle-type region of the 4D pseudo-singular manifold in the
/// (x2, alpha2) plane, bounded by two straight lines.
struct SaddleRegion {
    double c1 = 0.0;
    double c2 = 0.0;
    double s = 0.0;  // sqrt(-c2 / (3 c1))
    // plus branch: alpha2*(2c2/3+1)*s + x2 + (2c2/3)*s < 0
    double line_plus(double x2, double alpha2) const;
    // minus branch: -alpha2*(2c2/3+1)*s + x2 - (2c2/3)*s > 0
    double line_minus(double x2, double alpha2) const;
    bool contains(double x2, double alpha2) const;
    double alpha2_intercept() const;  // common point at x2 = 0
    double x2_intercept_plus() const;   // at alpha2 = 0
    double x2_intercept_minus() const;  // at alpha2 = 0
};

/// All zeros of the full slow-time vector field found by Newton from a
/// seed grid; the origin region is always probed.
std::vector<std::vector<double>> find_fixed_points(
    const SlowFastSystem& system,
    const std::vector<std::vector<double>>& seeds = {});

/// Ascending coefficients of the epsilon-weighted characteristic polynomial
/// of the full slow-time Jacobian at a fixed point (leading coefficient is
/// epsilon).
std::vector<double> characteristic_polynomial(
    const SlowFastSystem& system, std::span<const double> fixed_point);

/// Degree 3 or 4 only. Coefficients are normalized so the leading one is
/// positive before the determinants are formed.
RouthHurwitzReport routh_hurwitz(std::vector<double> coefficients,
                                 double marginal_band = 1e-8);

struct HopfResult {
    double value = 0.0;
    bool certified = false;       // complex pair with |Re| < 1e-4 at the root
    double pair_real_part = 0.0;  // real part of that pair
};

/// Bisection root of the relevant Routh-Hurwitz determinant (D2 for k = 2,
/// D3 for k = 3) as a function of the duck parameter, with the fixed point
/// tracked by Newton continuation across the bracket.
HopfResult hopf_parameter(const SlowFastSystem& system,
                          const std::string& duck_parameter_name,
                          double bracket_low, double bracket_high,
                          double tol = 1e-8);

CanardWindow canard_window(const SlowFastSystem& system,
                           const std::string& duck_parameter_name,
                           double scan_bound = 1.0);

/// sigma2 at a re-solved pseudo-singularity as a function of a parameter
/// (plus branch; x2 pinned to 0 for k = 3).
double sigma2_of_parameter(const SlowFastSystem& system,
                           const std::string& parameter_name, double value);

SaddleRegion saddle_region(double c1, double c2);

}  // namespace canard
