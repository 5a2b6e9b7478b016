// Shared fixtures for the unit and acceptance tests.
#pragma once

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "didolocus/didolocus.hpp"

namespace testing_support {

using namespace didolocus;
inline constexpr double pi = std::numbers::pi;

inline Poly2 poly(std::initializer_list<std::tuple<int, int, double>> terms) {
    Poly2 p;
    for (const auto& [i, j, c] : terms) p.add(i, j, c);
    return p;
}

inline MetricModel metric(std::initializer_list<std::tuple<int, int, double>> terms) {
    return MetricModel(BetaJet::from_poly(poly(terms)));
}

inline MetricModel metric_of(const Invariants& inv) { return MetricModel(BetaJet::from_poly(reconstruct_beta(inv))); }

/// Random germ on C with moderate coefficients.
inline Invariants random_on_c(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    Beta4Coefficients b4{0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng)};
    return Invariants::from_parameters(0.02 * u(rng), 0.4 * std::abs(u(rng)), 3 * u(rng), 0, 0,
                                       0.2 + 0.5 * std::abs(u(rng)), 3 * u(rng), 0.1 * u(rng), 0.05 * u(rng),
                                       0.05 * u(rng), b4);
}

/// Smallest angular distance between a simple P-root and a cusp angle, modulo pi/3
/// for cusps and pi for roots, and the largest |lambda| among simple roots.
struct Separation {
    double root_cusp = 0;
    double root_root = 0;
    double max_lambda = 0;
};

inline Separation separation(const Invariants& inv, FormulaSet set) {
    const IsoselfPrediction pred = isoself_predict(inv, 1, set);
    Separation s{INFINITY, INFINITY, 0};
    std::vector<double> cusps, roots;
    for (const auto& b : pred.branches) {
        if (b.kind == BranchKind::Cusp) cusps.push_back(b.phi0);
        else roots.push_back(b.phi0);
        if (b.kind == BranchKind::SimpleRoot) s.max_lambda = std::max(s.max_lambda, std::abs(b.coefficient));
    }
    for (double r : roots) {
        for (double c : cusps) s.root_cusp = std::min(s.root_cusp, std::abs(std::remainder(r - c, pi / 3)));
        for (double q : roots)
            if (q != r) s.root_root = std::min(s.root_root, std::abs(std::remainder(r - q, pi)));
    }
    return s;
}

/// GenericOnC under both formula sets, with P-roots well away from cusp angles and from
/// each other so that the c = 1e-8 section is in its asymptotic regime.
inline bool well_separated_generic(const Invariants& inv) {
    if (classify(inv, FormulaSet::Printed).stratum != Stratum::GenericOnC) return false;
    if (classify(inv, FormulaSet::Verified).stratum != Stratum::GenericOnC) return false;
    const Separation s = separation(inv, FormulaSet::Verified);
    return s.root_cusp > 0.1 && s.root_root > 0.1 && s.max_lambda < 5;
}

// With r1 = 0 the printed map gives A = -7 d44, B = -7 c44, C = 7 b44, D = 7 a44, and
// P = 2Re(nu) cos2phi - 2Im(nu) sin2phi + 2Re(mu) cos4phi - 2Im(mu) sin4phi.
inline Invariants with_mu_nu(cplx mu, cplx nu, cplx r3) {
    Beta4Coefficients b4;
    b4.d44 = -2 * nu.real() / 7;
    b4.c44 = 2 * nu.imag() / 7;
    b4.b44 = 2 * mu.real() / 7;
    b4.a44 = -2 * mu.imag() / 7;
    const double ar3 = std::abs(r3);
    const double th3 = ar3 > 0 ? std::atan2(r3.real(), -r3.imag()) : 0.0;
    return Invariants::from_parameters(0, 0, 0, 0, 0, ar3, th3, 0, 0, 0, b4);
}

inline int count_double_on_circle(const RootReport& r) {
    int n = 0;
    for (const auto& x : r.roots)
        if (x.on_unit_circle && x.multiplicity == 2) ++n;
    return n;
}

// mu, nu with a double circle root of Ptilde at z0 = exp(2 i phi0): choose C, D, then
// solve P(phi0) = P'(phi0) = 0 for A, B.
inline std::pair<cplx, cplx> double_root_mu_nu(double phi0, double C, double D) {
    const double c2 = std::cos(2 * phi0), s2 = std::sin(2 * phi0);
    const double r0 = -(C * std::cos(4 * phi0) + D * std::sin(4 * phi0));
    const double r1 = -(-4 * C * std::sin(4 * phi0) + 4 * D * std::cos(4 * phi0));
    // [c2 s2; -2 s2 2 c2] [A B]^T = [r0 r1]^T, determinant 2.
    const double A = (2 * c2 * r0 - s2 * r1) / 2;
    const double B = (2 * s2 * r0 + c2 * r1) / 2;
    return {cplx(C / 2, -D / 2), cplx(A / 2, -B / 2)};
}

// r3 making exp(i a) a root of T: r3 e^{3ia} = -conj(r3).
inline cplx r3_through(double a, double modulus) { return std::polar(modulus, (pi - 3 * a) / 2); }

// Brute-force search for a common zero of Ptilde and T on the unit circle: scan a grid
// for joint near-zeros, then minimize max(|P|, |T|) (relative to the coefficient sums)
// inside the bracketing cells. A common root reaches the rounding level; near misses of
// random instances stay orders of magnitude above the threshold.
inline bool joint_zero_on_grid(const std::vector<cplx>& p, const std::vector<cplx>& t, int n = 100000,
                               double threshold = 1e-7) {
    double np = 0, nt = 0;
    for (auto c : p) np += std::abs(c);
    for (auto c : t) nt += std::abs(c);
    auto joint = [&](double a) {
        const cplx z = std::polar(1.0, a);
        return std::max(std::abs(poly_eval(p, z)) / np, std::abs(poly_eval(t, z)) / nt);
    };
    const double cell = 2 * pi / n;
    for (int k = 0; k < n; ++k) {
        if (joint(cell * k) > 1e-2) continue;
        // Golden-section search on [a, b]; the joint residual is unimodal at this scale.
        double a = cell * (k - 1), b = cell * (k + 1);
        const double g = (std::sqrt(5.0) - 1) / 2;
        double c = b - g * (b - a), d = a + g * (b - a);
        for (int it = 0; it < 80; ++it) {
            if (joint(c) < joint(d)) b = d;
            else a = c;
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        if (joint(0.5 * (a + b)) < threshold) return true;
    }
    return false;
}

}  // namespace testing_support
