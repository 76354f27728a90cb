#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "canard/characteristic.hpp"
#include "oracles.hpp"

using canard::cubic_charge;
using canard::CubicFit;
using canard::fit_cubic;
using canard::pwl_charge;
using canard::square_error;

namespace {

// independent oracle: minimize the quadrature-evaluated square error over
// (c1, c2). S is quadratic, so the normal equations are 2x2 with Gram
// integrals of phi^3 and phi, evaluated by fixed-order composite Simpson.
std::array<double, 2> quadrature_fit(double a, double b, double d) {
    auto simpson = [&](auto f) {
        double acc = 0.0;
        // split at the kinks
        const double knots[] = {-d, -1.0, 1.0, d};
        for (int seg = 0; seg < 3; ++seg) {
            const double lo = knots[seg], hi = knots[seg + 1];
            const int n = 2000;
            const double h = (hi - lo) / n;
            double sum = f(lo) + f(hi);
            for (int i = 1; i < n; ++i)
                sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
            acc += sum * h / 3.0;
        }
        return acc;
    };
    auto k = [&](double phi) { return pwl_charge(phi, a, b); };
    const double m11 = simpson([](double p) { return p * p * p * p * p * p; });
    const double m12 = simpson([](double p) { return p * p * p * p; });
    const double m22 = simpson([](double p) { return p * p; });
    const double r1 = simpson([&](double p) { return k(p) * p * p * p; });
    const double r2 = simpson([&](double p) { return k(p) * p; });
    const double det = m11 * m22 - m12 * m12;
    return {(r1 * m22 - r2 * m12) / det, (m11 * r2 - m12 * r1) / det};
}

}  // namespace

TEST_CASE("piecewise-linear characteristic") {
    CHECK(pwl_charge(0.0, -2.0, 4.0) == 0.0);
    CHECK(pwl_charge(1.0, -2.0, 4.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(pwl_charge(3.0, -2.0, 4.0) == doctest::Approx(6.0).epsilon(1e-15));
    // odd symmetry
    for (double phi : {0.25, 0.5, 1.5, 2.7})
        CHECK(pwl_charge(-phi, -2.0, 4.0) ==
              doctest::Approx(-pwl_charge(phi, -2.0, 4.0)).epsilon(1e-15));
}

TEST_CASE("cubic characteristic") {
    const double c1 = 280.0 / 729.0, c2 = -26.0 / 27.0;
    CHECK(cubic_charge(0.0, c1, c2) == 0.0);
    CHECK(cubic_charge(1.0, c1, c2) ==
          doctest::Approx(-422.0 / 729.0).epsilon(1e-15));
    for (double phi : {0.3, 1.1, 2.0})
        CHECK(cubic_charge(-phi, c1, c2) ==
              doctest::Approx(-cubic_charge(phi, c1, c2)).epsilon(1e-15));
}

TEST_CASE("closed-form fit reproduces the published coefficients") {
    const CubicFit fit = fit_cubic(-2.0, 4.0, 3.0);
    CHECK(std::abs(fit.c1 - 280.0 / 729.0) < 1e-12);
    CHECK(std::abs(fit.c2 - (-26.0 / 27.0)) < 1e-12);
    CHECK(fit.residual >= 0.0);

    const CubicFit flat = fit_cubic(4.0, 4.0, 2.0);
    CHECK(flat.c1 == 0.0);
    CHECK(flat.c2 == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(flat.residual) < 1e-10);

    CHECK_THROWS_AS((void)fit_cubic(-2.0, 4.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_cubic(-2.0, 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("closed form agrees with the quadrature-minimization oracle") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> slope(-4.0, 4.0);
    std::uniform_real_distribution<double> width(1.05, 6.0);
    const auto check_one = [](double a, double b, double d) {
        const CubicFit fit = fit_cubic(a, b, d);
        const auto [c1, c2] = quadrature_fit(a, b, d);
        CHECK(std::abs(fit.c1 - c1) < 1e-8);
        CHECK(std::abs(fit.c2 - c2) < 1e-8);
    };
    check_one(-2.0, 4.0, 2.0);
    for (int trial = 0; trial < 20; ++trial)
        check_one(slope(rng), slope(rng), width(rng));
}

TEST_CASE("square error: definition, exactness and optimality") {
    const CubicFit fit = fit_cubic(-2.0, 4.0, 3.0);
    CHECK(square_error(-2.0, 4.0, 3.0, fit.c1, fit.c2) ==
          doctest::Approx(fit.residual).epsilon(1e-12));
    CHECK(std::abs(square_error(4.0, 4.0, 2.0, 0.0, 4.0)) < 1e-10);
    // perturbing away from the optimum can only increase S
    for (double delta : {1e-3, -1e-3, 0.1})
        CHECK(square_error(-2.0, 4.0, 3.0, fit.c1, fit.c2 + delta) >
              fit.residual);
}

TEST_CASE("stationarity of the fit under central differences") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    std::uniform_real_distribution<double> width(1.1, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = slope(rng), b = slope(rng), d = width(rng);
        const CubicFit fit = fit_cubic(a, b, d);
        auto s_of = [&](const std::vector<double>& c) {
            return square_error(a, b, d, c[0], c[1]);
        };
        const std::vector<double> c{fit.c1, fit.c2};
        CHECK(std::abs(oracles::grad_fd(s_of, c, 0)) < 1e-6);
        CHECK(std::abs(oracles::grad_fd(s_of, c, 1)) < 1e-6);
    }
}

TEST_CASE("cubic extrema sit near the PWL kinks for the published fit") {
    const CubicFit fit = fit_cubic(-2.0, 4.0, 3.0);
    // local extremum of c1 phi^3 + c2 phi at sqrt(-c2 / (3 c1)); the PWL
    // extrema are at the kinks phi = +-1
    const double phi_ext = std::sqrt(-fit.c2 / (3.0 * fit.c1));
    CHECK(std::abs(phi_ext - 1.0) < 0.1);
}
