#include "canard/characteristic.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace canard {

double pwl_charge(double phi, double a, double b) {
    return b * phi +
           0.5 * (a - b) * (std::abs(phi + 1.0) - std::abs(phi - 1.0));
}

double cubic_charge(double phi, double c1, double c2) {
    return c1 * phi * phi * phi + c2 * phi;
}

double cubic_charge(double phi, const CubicFit& fit) {
    return cubic_charge(phi, fit.c1, fit.c2);
}

namespace {

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adaptive(const std::function<double(double)>& f, double lo, double hi,
                double flo, double fmid, double fhi, double whole, double tol,
                int depth) {
    const double mid = 0.5 * (lo + hi);
    const double fl = f(0.5 * (lo + mid));
    const double fr = f(0.5 * (mid + hi));
    const double left = simpson(lo, mid, flo, fl, fmid);
    const double right = simpson(mid, hi, fmid, fr, fhi);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, lo, mid, flo, fl, fmid, left, 0.5 * tol, depth - 1) +
           adaptive(f, mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    return adaptive(f, lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi),
                    tol, 40);
}

}  // namespace

double square_error(double a, double b, double d, double c1, double c2) {
    if (d <= 0.0) throw std::invalid_argument("square_error: d must be > 0");
    auto integrand = [&](double phi) {
        const double e = pwl_charge(phi, a, b) - cubic_charge(phi, c1, c2);
        return e * e;
    };
    // split at the PWL kinks so Simpson sees smooth pieces only
    double total = 0.0;
    double cuts[4] = {-d, -1.0, 1.0, d};
    if (d <= 1.0) {
        total = integrate(integrand, -d, d, 1e-10);
    } else {
        for (int s = 0; s < 3; ++s)
            total += integrate(integrand, cuts[s], cuts[s + 1], 1e-10 / 3.0);
    }
    return total;
}

CubicFit fit_cubic(double a, double b, double d) {
    if (d <= 1.0)
        throw std::invalid_argument("fit_cubic: requires d > 1");
    CubicFit fit;
    fit.a = a;
    fit.b = b;
    fit.d = d;
    const double d2 = d * d;
    const double d5 = d2 * d2 * d;
    const double d7 = d5 * d2;
    fit.c1 = -35.0 * (a - b) * (d2 - 1.0) * (d2 - 1.0) / (16.0 * d7);
    fit.c2 = (a - b) * (21.0 - 50.0 * d2 + 45.0 * d2 * d2) / (16.0 * d5) + b;
    fit.residual = square_error(a, b, d, fit.c1, fit.c2);
    return fit;
}

}  // namespace canard
