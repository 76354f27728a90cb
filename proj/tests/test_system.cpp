#include <doctest.h>

#include <cmath>
#include <random>

#include "canard/circuits.hpp"
#include "canard/system.hpp"

using canard::make_circuit;
using canard::SlowFastSystem;
using canard::TimeScale;

TEST_CASE("slow-time rhs values for the 3D circuit") {
    const SlowFastSystem sys = make_circuit("chua3d_cubic");
    const std::vector<double> origin{0.0, 0.0, 0.0};
    for (double v : canard::eval_rhs(sys, origin, TimeScale::Slow))
        CHECK(v == 0.0);

    const std::vector<double> state{0.0, 0.0, 1.0};
    const auto rhs = canard::eval_rhs(sys, state, TimeScale::Slow);
    CHECK(rhs[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rhs[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rhs[2] ==
          doctest::Approx(10.0 * (-(280.0 / 729.0) + 26.0 / 27.0))
              .epsilon(1e-13));
}

TEST_CASE("4D origin is a fixed point") {
    const SlowFastSystem sys = make_circuit("chua4d_cubic");
    const std::vector<double> origin(4, 0.0);
    for (auto scale : {TimeScale::Fast, TimeScale::Slow})
        for (double v : canard::eval_rhs(sys, origin, scale)) CHECK(v == 0.0);
}

TEST_CASE("fast-time rhs equals epsilon times slow-time rhs") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> point(-2.0, 2.0);
    for (const char* name : {"chua3d_cubic", "chua4d_cubic", "chua3d_pwl"}) {
        const SlowFastSystem sys = make_circuit(name);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(sys.dim());
            for (auto& v : x) v = point(rng);
            const auto fast = canard::eval_rhs(sys, x, TimeScale::Fast);
            const auto slow = canard::eval_rhs(sys, x, TimeScale::Slow);
            for (int i = 0; i < sys.dim(); ++i)
                CHECK(fast[i] ==
                      doctest::Approx(sys.epsilon * slow[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("critical residual on and off the manifold") {
    const SlowFastSystem sys3 = make_circuit("chua3d_cubic");
    const double c1 = sys3.params.at("c1"), c2 = sys3.params.at("c2");
    const double y = 0.8;
    const std::vector<double> on{-(c1 * y * y * y + c2 * y), 0.3, y};
    CHECK(std::abs(canard::critical_residual(sys3, on)) < 1e-15);
    CHECK(canard::critical_residual(sys3, std::vector<double>{1.0, 0.0, 0.0}) ==
          doctest::Approx(-1.0).epsilon(1e-15));

    const SlowFastSystem sys4 = make_circuit("chua4d_cubic");
    const double d1 = sys4.params.at("c1"), d2 = sys4.params.at("c2");
    const std::vector<double> on4{d1 * y * y * y + d2 * y, 0.0, 0.0, y};
    CHECK(std::abs(canard::critical_residual(sys4, on4)) < 1e-15);
}

TEST_CASE("manifold sampling returns the graph x1 = phi(x2, y1)") {
    const SlowFastSystem sys = make_circuit("chua3d_cubic");
    const double c1 = sys.params.at("c1"), c2 = sys.params.at("c2");
    const auto mesh = canard::sample_critical_manifold(
        sys, {{-1.0, 1.0}, {-1.0, 1.0}}, {3, 3});
    REQUIRE(mesh.states.size() == 9);
    CHECK(mesh.failed_nodes.empty());
    for (const auto& s : mesh.states)
        CHECK(std::abs(canard::critical_residual(sys, s)) < 1e-10);
    // nodes are row-major over (x2, y1); y1 = 1 is the last column
    const auto& last = mesh.states.back();
    CHECK(last[1] == 1.0);
    CHECK(last[2] == 1.0);
    CHECK(last[0] == doctest::Approx(-(c1 + c2)).epsilon(1e-12));
    // y1 = 0 lies in the middle column, where the cubic vanishes
    CHECK(mesh.states[4][2] == 0.0);
    CHECK(std::abs(mesh.states[4][0]) < 1e-12);

    const SlowFastSystem sys4 = make_circuit("chua4d_cubic");
    const auto mesh4 = canard::sample_critical_manifold(
        sys4, {{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}}, {1, 1, 1});
    REQUIRE(mesh4.states.size() == 1);
    CHECK(mesh4.states[0][0] ==
          doctest::Approx(sys4.params.at("c1") + sys4.params.at("c2"))
              .epsilon(1e-12));
}

TEST_CASE("reduced flow on the critical manifold") {
    const SlowFastSystem sys = make_circuit("chua3d_cubic");
    const double c1 = sys.params.at("c1"), c2 = sys.params.at("c2");

    // x2 = y1 makes the fast numerator vanish
    const std::vector<double> state{-(c1 + c2), 1.0, 1.0};
    const auto flow = canard::reduced_flow(sys, state);
    CHECK(std::abs(flow[2]) < 1e-12);

    // fold points: dg1/dy1 = 0
    const double s = std::sqrt(-c2 / (3.0 * c1));
    const std::vector<double> fold{-(c1 * s * s * s + c2 * s), 0.3, s};
    CHECK_THROWS_AS((void)canard::reduced_flow(sys, fold), std::domain_error);

    // invariance: d(g1)/dt = grad(g1) . reduced_flow = 0 off the fold
    const auto mesh = canard::sample_critical_manifold(
        sys, {{-1.0, 1.0}, {1.2, 2.0}}, {4, 4});
    for (const auto& m : mesh.states) {
        const auto f = canard::reduced_flow(sys, m);
        const canard::Jet2 g = sys.fast_field.jet(m, sys.params);
        double dot = 0.0;
        for (int i = 0; i < sys.dim(); ++i) dot += g.grad(i) * f[i];
        CHECK(std::abs(dot) < 1e-9);
    }

    // 4D: x3 = x1 + y1 makes the fast numerator vanish
    const SlowFastSystem sys4 = make_circuit("chua4d_cubic");
    const double e1 = sys4.params.at("c1"), e2 = sys4.params.at("c2");
    const double y = 0.4;
    const double x1 = e1 * y * y * y + e2 * y;
    const auto flow4 =
        canard::reduced_flow(sys4, std::vector<double>{x1, 0.2, x1 + y, y});
    CHECK(std::abs(flow4[3]) < 1e-12);
}
