#include "doctest.h"
#include "support.hpp"

using namespace testing_support;

TEST_CASE("hamiltonian values") {
    CHECK(hamiltonian(metric({}), {0, 0, 0, 1, 0, 7}) == doctest::Approx(0.5));
    const MetricModel m = metric({{0, 0, 0.2}, {1, 0, 0.4}, {0, 3, -0.3}});
    for (double phi : {0.0, 1.0, 2.5}) CHECK(hamiltonian(m, {0, 0, 0, std::cos(phi), std::sin(phi), 3}) == doctest::Approx(0.5));
    CHECK(hamiltonian(metric({}), {1, 0, 0, 0, 1, 1}) == doctest::Approx(0.125));
}

TEST_CASE("Heisenberg geodesics follow the closed form") {
    const MetricModel m = metric({});
    for (double rho : {1.0, 0.3}) {
        LaunchSpec l;
        l.phi = 0.4;
        l.rho = rho;
        l.s_max = 2 * pi * rho;
        const Trajectory tr = integrate(m, l, false);
        double worst = 0;
        for (const auto& st : tr.samples) {
            const double t = st.s / rho;
            const double x = rho * 2 * std::sin(t / 2) * std::cos(l.phi - t / 2);
            const double y = rho * 2 * std::sin(t / 2) * std::sin(l.phi - t / 2);
            const double w = rho * rho * 0.5 * (t - std::sin(t));
            worst = std::max({worst, std::abs(st.x - x), std::abs(st.y - y), std::abs(st.w - w)});
        }
        CHECK(worst <= 1e-8);
        const auto& end = tr.samples.back();
        CHECK(end.s == doctest::Approx(2 * pi * rho));
        CHECK(std::abs(end.x) <= 1e-8);
        CHECK(std::abs(end.y) <= 1e-8);
        CHECK(end.w == doctest::Approx(pi * rho * rho).epsilon(1e-9));
    }
}

TEST_CASE("zero-length integration returns the launch state") {
    const MetricModel m = metric({{1, 0, 0.5}});
    LaunchSpec l;
    l.phi = 0.9;
    l.rho = 0.5;
    l.s_max = 0;
    const Trajectory tr = integrate(m, l, true);
    REQUIRE(tr.samples.size() == 1);
    const auto& s = tr.samples[0];
    CHECK(s.x == 0);
    CHECK(s.y == 0);
    CHECK(s.w == 0);
    CHECK(s.pt == doctest::Approx(std::cos(0.9)));
    CHECK(s.qt == doctest::Approx(std::sin(0.9)));
    CHECK(s.rr == doctest::Approx(2));
    const auto& t = tr.tangents[0];
    const std::array<double, 12> expect{0, 0, 0, -std::sin(0.9), std::cos(0.9), 0, 0, 0, 0, 0, 0, -4};
    for (int k = 0; k < 12; ++k) CHECK(t[k] == doctest::Approx(expect[k]));
}

TEST_CASE("energy is conserved") {
    const std::vector<MetricModel> ms = {metric({}), metric({{0, 0, 0.1}}), metric({{1, 0, 0.3}, {0, 2, 0.2}}),
                                         metric({{3, 0, 0.5}, {1, 2, -1.5}, {2, 2, 0.3}})};
    for (const auto& m : ms)
        for (double phi : {0.0, 1.3, 4.0}) {
            LaunchSpec l;
            l.phi = phi;
            l.rho = 0.3;
            l.s_max = 2 * pi * 0.3;
            const Trajectory tr = integrate(m, l, false);
            for (const auto& st : tr.samples) CHECK(std::abs(hamiltonian(m, st) - 0.5) <= 10 * l.tol);
        }
}

TEST_CASE("time reversal returns to the start") {
    const MetricModel m = metric({{0, 0, 0.05}, {1, 0, 0.3}, {2, 1, 0.4}});
    LaunchSpec l;
    l.phi = 0.7;
    l.rho = 0.4;
    l.s_max = 2;
    const Trajectory fwd = integrate(m, l, false);
    const Trajectory back = integrate_from(m, fwd.samples.back(), -l.s_max, l.tol, l.rho);
    const auto& s = back.samples.back();
    CHECK(std::abs(s.x) <= 100 * l.tol);
    CHECK(std::abs(s.y) <= 100 * l.tol);
    CHECK(std::abs(s.w) <= 100 * l.tol);
    CHECK(std::abs(s.pt - std::cos(l.phi)) <= 100 * l.tol);
    CHECK(std::abs(s.qt - std::sin(l.phi)) <= 100 * l.tol);
}

TEST_CASE("variational sensitivities match finite differences") {
    const MetricModel m = metric({{0, 0, 0.05}, {1, 0, 0.3}, {0, 2, -0.2}, {3, 0, 0.4}});
    LaunchSpec l;
    l.phi = 1.1;
    l.rho = 0.5;
    l.s_max = 2.5;
    l.tol = 1e-12;
    const Trajectory tr = integrate(m, l, true);
    const Mat3& J = tr.sensitivities.back();
    auto end = [&](double phi, double rho) {
        LaunchSpec k = l;
        k.phi = phi;
        k.rho = rho;
        const auto st = integrate(m, k, false).samples.back();
        return std::array<double, 3>{st.x, st.y, st.w};
    };
    const double e = 1e-5;
    const auto pp = end(l.phi + e, l.rho), pm = end(l.phi - e, l.rho);
    const auto rp = end(l.phi, l.rho + e), rm = end(l.phi, l.rho - e);
    for (int k = 0; k < 3; ++k) {
        const double dphi = (pp[k] - pm[k]) / (2 * e), drho = (rp[k] - rm[k]) / (2 * e);
        CHECK(J[k][0] == doctest::Approx(dphi).epsilon(1e-4).scale(1));
        CHECK(J[k][1] == doctest::Approx(drho).epsilon(1e-4).scale(1));
    }
}

TEST_CASE("flow does not depend on w") {
    const MetricModel m = metric({{1, 0, 0.3}, {1, 1, 0.2}});
    GeodesicState a{0, 0, 0, std::cos(0.3), std::sin(0.3), 2, 0};
    GeodesicState b = a;
    b.w = 0.75;
    const auto ta = integrate_from(m, a, 1.5, 1e-11, 0.5).samples.back();
    const auto tb = integrate_from(m, b, 1.5, 1e-11, 0.5).samples.back();
    CHECK(tb.x == doctest::Approx(ta.x).epsilon(1e-12));
    CHECK(tb.y == doctest::Approx(ta.y).epsilon(1e-12));
    CHECK(tb.w - 0.75 == doctest::Approx(ta.w).epsilon(1e-12));
}

TEST_CASE("trajectory CSV") {
    LaunchSpec l;
    l.s_max = 0.1;
    const std::string csv = trajectory_csv(integrate(metric({}), l, false));
    CHECK(csv.rfind("s,x,y,w,pt,qt,rr\n", 0) == 0);
    CHECK(csv.find("0,0,0,0,1,0,1\n") != std::string::npos);
}

TEST_CASE("leaving the domain is reported") {
    const MetricModel m = metric({{0, 0, -1}});
    LaunchSpec l;
    l.rho = 3;
    l.s_max = 20;
    CHECK_THROWS_AS(integrate(m, l, false), Error);
}
