#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "canard/circuits.hpp"
#include "canard/folded.hpp"

using canard::find_pseudo_singular_points;
using canard::genericity_check;
using canard::make_circuit;
using canard::PseudoSingularity;
using canard::pseudo_singular_manifold;
using canard::SlowFastSystem;

namespace {

double max_residual(const SlowFastSystem& sys, const PseudoSingularity& psp) {
    double worst = 0.0;
    for (double r : canard::pseudo_singular_residuals(sys, psp.state))
        worst = std::max(worst, std::abs(r));
    return worst;
}

const PseudoSingularity& branch_of(
    const std::vector<PseudoSingularity>& points,
    PseudoSingularity::Branch branch) {
    for (const auto& p : points)
        if (p.sign_branch == branch) return p;
    throw std::runtime_error("requested branch not found");
}

}  // namespace

TEST_CASE("3D pseudo-singular points match the closed form") {
    const SlowFastSystem sys = make_circuit("chua3d_cubic");
    const double c1 = sys.params.at("c1"), c2 = sys.params.at("c2");
    const double s = std::sqrt(-c2 / (3.0 * c1));
    CHECK(s == doctest::Approx(0.914174).epsilon(1e-5));

    const auto points = find_pseudo_singular_points(sys);
    REQUIRE(points.size() == 2);
    for (const auto& p : points) CHECK(max_residual(sys, p) < 1e-10);

    // closed form: (x1, x2, y1) = (-(2 c2 / 3) s, s, s) on the plus branch
    const auto& plus = branch_of(points, PseudoSingularity::Branch::Plus);
    CHECK(std::abs(plus.state[0] - (-(2.0 * c2 / 3.0) * s)) < 1e-9);
    CHECK(std::abs(plus.state[1] - s) < 1e-9);
    CHECK(std::abs(plus.state[2] - s) < 1e-9);
    const auto& minus = branch_of(points, PseudoSingularity::Branch::Minus);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(minus.state[i] + plus.state[i]) < 1e-9);
}

TEST_CASE("3D pseudo-singular points do not depend on gamma") {
    std::vector<std::vector<double>> reference;
    for (double gamma : {0.0, 0.3, 0.9}) {
        const auto points = find_pseudo_singular_points(
            make_circuit("chua3d_cubic", {{"gamma", gamma}}));
        REQUIRE(points.size() == 2);
        std::vector<std::vector<double>> states;
        for (const auto& p : points) states.push_back(p.state);
        std::sort(states.begin(), states.end());
        if (reference.empty()) {
            reference = states;
        } else {
            for (int p = 0; p < 2; ++p)
                for (int i = 0; i < 3; ++i)
                    CHECK(std::abs(states[p][i] - reference[p][i]) < 1e-9);
        }
    }
}

TEST_CASE("particular-case pseudo-singular points") {
    const auto points =
        find_pseudo_singular_points(make_circuit("chua3d_particular"));
    REQUIRE(points.size() == 2);
    // c1 = 1/3, c2 = -1: s = 1, points (+-2/3, -+1, -+1)
    const auto& plus = branch_of(points, PseudoSingularity::Branch::Plus);
    CHECK(std::abs(plus.state[0] - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(plus.state[1] - 1.0) < 1e-9);
    CHECK(std::abs(plus.state[2] - 1.0) < 1e-9);
}

TEST_CASE("4D pseudo-singular manifold with a pinned free coordinate") {
    const SlowFastSystem sys = make_circuit("chua4d_cubic");
    const double c1 = sys.params.at("c1"), c2 = sys.params.at("c2");
    const double s = std::sqrt(-c2 / (3.0 * c1));

    const auto plus = pseudo_singular_manifold(
        sys, 1, 0.0, PseudoSingularity::Branch::Plus);
    CHECK(max_residual(sys, plus) < 1e-10);
    REQUIRE(plus.free_index.has_value());
    CHECK(*plus.free_index == 1);
    CHECK(std::abs(plus.state[0] - (2.0 * c2 / 3.0) * s) < 1e-9);
    CHECK(plus.state[1] == 0.0);
    CHECK(std::abs(plus.state[2] - ((2.0 * c2 / 3.0) + 1.0) * s) < 1e-9);
    CHECK(std::abs(plus.state[3] - s) < 1e-9);
    // G1 = beta1 (x3 - x1 - y1) = 0 forces x3 = x1 + y1
    CHECK(std::abs(plus.state[2] - (plus.state[0] + plus.state[3])) < 1e-9);

    const auto minus = pseudo_singular_manifold(
        sys, 1, 0.0, PseudoSingularity::Branch::Minus);
    CHECK(std::abs(minus.state[3] + s) < 1e-9);

    // x2 is absent from the defining equations: pinning it elsewhere moves
    // only the free coordinate
    const auto shifted = pseudo_singular_manifold(
        sys, 1, 5.0, PseudoSingularity::Branch::Plus);
    CHECK(shifted.state[1] == 5.0);
    CHECK(std::abs(shifted.state[0] - plus.state[0]) < 1e-9);
    CHECK(std::abs(shifted.state[2] - plus.state[2]) < 1e-9);
    CHECK(std::abs(shifted.state[3] - plus.state[3]) < 1e-9);
}

TEST_CASE("genericity hypotheses at the pseudo-singularities") {
    const SlowFastSystem sys3 = make_circuit("chua3d_cubic");
    for (const auto& p : find_pseudo_singular_points(sys3)) {
        const auto report = genericity_check(sys3, p);
        CHECK(report.dg1_dx1 == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(report.d2g1_dy1sq) > 1e-8);
        CHECK(std::abs(report.f2_value) > 1e-8);
        CHECK(report.all_pass);
    }

    const SlowFastSystem sys4 = make_circuit("chua4d_cubic");
    const auto psp4 = pseudo_singular_manifold(
        sys4, 1, 0.0, PseudoSingularity::Branch::Plus);
    const auto report4 = genericity_check(sys4, psp4);
    CHECK(report4.dg1_dx1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report4.all_pass);

    // degenerate cubic fold: g1 = y1^3 - x1 has d2g/dy1^2 = 0 at the origin
    SlowFastSystem flat;
    flat.k = 2;
    flat.epsilon = 0.1;
    flat.slow_fields = {
        canard::ScalarField::from(
            [](auto, const canard::ParamMap&) { return 1.0; }),
        canard::ScalarField::from(
            [](auto, const canard::ParamMap&) { return 1.0; })};
    flat.fast_field = canard::ScalarField::from(
        [](auto x, const canard::ParamMap&) { return pow(x[2], 3) - x[0]; });
    PseudoSingularity origin;
    origin.state = {0.0, 0.0, 0.0};
    const auto flat_report = genericity_check(flat, origin);
    CHECK(flat_report.d2g1_dy1sq == 0.0);
    CHECK_FALSE(flat_report.all_pass);
}
