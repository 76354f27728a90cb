#pragma once

namespace canard {

/// Least-squares cubic replacement c1*phi^3 + c2*phi of the piecewise-linear
/// memristor charge over [-d, d].
struct CubicFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double a = 0.0;  // inner slope of the PWL characteristic
    double b = 0.0;  // outer slope
    double d = 0.0;  // half-width of the approximation interval
    double residual = 0.0;  // square error S at the optimum
};

/// Piecewise-linear flux-charge characteristic of the Chua memristor.
double pwl_charge(double phi, double a, double b);

double cubic_charge(double phi, double c1, double c2);
double cubic_charge(double phi, const CubicFit& fit);

/// Closed-form least-squares fit; requires d > 1.
CubicFit fit_cubic(double a, double b, double d);

/// Integral of (k - k_hat)^2 over [-d, d] by adaptive Simpson quadrature,
/// split at the kinks phi = +-1. Absolute accuracy ~1e-10.
double square_error(double a, double b, double d, double c1, double c2);

/// The published coefficients of the fourth-order circuit; the generating
/// (a, b, d) are not known, so they are stored verbatim.
inline constexpr double kChua4dC1 = 0.393781;
inline constexpr double kChua4dC2 = -0.72357;

}  // namespace canard
