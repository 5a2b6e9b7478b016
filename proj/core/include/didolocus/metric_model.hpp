/// Isoperimetric normal-form metric germs.
///
/// A metric is given by the Taylor polynomial of beta(x, y). The orthonormal
/// frame is F = (1 + y^2 beta, -x y beta, (y/2) gamma) and
/// G = (-x y beta, 1 + x^2 beta, -(x/2) gamma), where gamma is the integral
/// expression evaluated by Gauss-Legendre quadrature.
#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "didolocus/error.hpp"

namespace didolocus {

using cplx = std::complex<double>;

inline constexpr int kMaxBetaDegree = 6;

/// Real bivariate polynomial stored sparsely as (i, j) -> coefficient of x^i y^j.
class Poly2 {
public:
    using Key = std::pair<int, int>;

    Poly2() = default;
    explicit Poly2(std::map<Key, double> coeffs);

    double coeff(int i, int j) const;
    void add(int i, int j, double c);
    const std::map<Key, double>& terms() const { return coeffs_; }

    double eval(double x, double y) const;
    /// Highest total degree among nonzero terms, or -1 for the zero polynomial.
    int degree() const;
    /// True when every nonzero term has total degree k (the zero polynomial qualifies).
    bool is_homogeneous(int k) const;
    Poly2 homogeneous_part(int k) const;
    /// Composition with the rotation (x, y) -> (cos a x - sin a y, sin a x + cos a y).
    Poly2 rotated(double angle) const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(double s) const;

    /// Largest absolute coefficient.
    double max_abs() const;

private:
    std::map<Key, double> coeffs_;
};

/// Taylor jet of beta at the origin, total degree at most 6.
struct BetaJet {
    Poly2 coeffs;

    static BetaJet from_poly(const Poly2& p);
    double b0() const { return coeffs.coeff(0, 0); }
};

struct Beta4Coefficients {
    double L44 = 0, a44 = 0, b44 = 0, c44 = 0, d44 = 0;
};

/// Invariants of the jet obtained by isotypic decomposition.
///
/// r3 is stored as |r3|(sin theta3 - i cos theta3) and v as -v1 + i v2.
/// A, B, C, D are the coefficients of P(phi) = A cos2phi + B sin2phi + C cos4phi + D sin4phi.
struct Invariants {
    double b0 = 0;
    cplx r1{0, 0};
    cplx r2{0, 0};
    cplx r3{0, 0};
    double tau0 = 0;
    cplx v{0, 0};
    Beta4Coefficients beta4;
    cplx mu{0, 0};
    cplx nu{0, 0};
    double A = 0, B = 0, C = 0, D = 0;

    double abs_r1() const { return std::abs(r1); }
    double abs_r2() const { return std::abs(r2); }
    double abs_r3() const { return std::abs(r3); }
    double theta1() const;
    double theta2() const;
    double theta3() const;
    double v1() const { return -v.real(); }
    double v2() const { return v.imag(); }

    /// Builds a consistent invariant set from the polar parameters; mu, nu and A..D
    /// are derived.
    static Invariants from_parameters(double b0, double abs_r1, double theta1, double abs_r2,
                                      double theta2, double abs_r3, double theta3, double tau0,
                                      double v1, double v2, const Beta4Coefficients& b4);
    /// Recomputes A, B, C, D, mu and nu from r1 and beta4.
    void derive_p_coefficients();
};

/// Splits a homogeneous polynomial of degree k into its angular characters:
/// component j has angular dependence spanned by cos(j phi), sin(j phi). Only nonzero
/// components are returned.
/// Throws "mixed degrees" for non-homogeneous input.
std::map<int, Poly2> isotypic_decompose(const Poly2& p);

Invariants extract_invariants(const BetaJet& beta);

/// Sum b0 + beta11 + beta22 + beta20 + beta33 + beta31 + beta4 assembled from invariants.
Poly2 reconstruct_beta(const Invariants& inv);

/// Value with gradient and Hessian in (x, y). Arithmetic follows the chain rule, so
/// frame components built from jets carry exact second derivatives.
struct Jet2 {
    double v = 0, x = 0, y = 0, xx = 0, xy = 0, yy = 0;

    static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static Jet2 var_x(double x0) { return {x0, 1, 0, 0, 0, 0}; }
    static Jet2 var_y(double y0) { return {y0, 0, 1, 0, 0, 0}; }

    Jet2 operator+(const Jet2& o) const { return {v + o.v, x + o.x, y + o.y, xx + o.xx, xy + o.xy, yy + o.yy}; }
    Jet2 operator-(const Jet2& o) const { return {v - o.v, x - o.x, y - o.y, xx - o.xx, xy - o.xy, yy - o.yy}; }
    Jet2 operator-() const { return {-v, -x, -y, -xx, -xy, -yy}; }
    Jet2 operator*(double s) const { return {v * s, x * s, y * s, xx * s, xy * s, yy * s}; }
    Jet2 operator*(const Jet2& o) const {
        return {v * o.v,
                x * o.v + v * o.x,
                y * o.v + v * o.y,
                xx * o.v + 2 * x * o.x + v * o.xx,
                xy * o.v + x * o.y + y * o.x + v * o.xy,
                yy * o.v + 2 * y * o.y + v * o.yy};
    }
    Jet2 operator+(double c) const { return {v + c, x, y, xx, xy, yy}; }
};

struct GammaValue {
    double gamma = 1, dgamma_dx = 0, dgamma_dy = 0;
};

struct FrameFields {
    std::array<double, 3> F{};
    std::array<double, 3> G{};
};

/// Frame components with derivatives through second order in (x, y).
struct FrameJet {
    std::array<Jet2, 3> F;
    std::array<Jet2, 3> G;
};

class MetricModel {
public:
    explicit MetricModel(BetaJet beta, int quadrature_order = 32);

    const BetaJet& beta() const { return beta_; }
    const Invariants& inv() const { return inv_; }
    int quadrature_order() const { return quadrature_order_; }

    GammaValue eval_gamma(double x, double y) const;
    Jet2 gamma_jet(double x, double y) const;
    Jet2 beta_jet(double x, double y) const;
    FrameFields frame_fields(double x, double y) const;
    FrameJet frame_jet(double x, double y) const;

    /// Parses {"beta": {"terms": [{"i":..,"j":..,"c":..}]}, "quadrature_order": n}.
    static MetricModel from_json_text(const std::string& text);
    static MetricModel from_json_file(const std::string& path);
    std::string to_json_text() const;

private:
    BetaJet beta_;
    Invariants inv_;
    int quadrature_order_;
    std::vector<double> nodes_;    // on [0, 1]
    std::vector<double> weights_;  // on [0, 1]
    // g = (x^2 + y^2) beta as dense coefficients g_[i][j], total degree <= 8.
    std::array<std::array<double, kMaxBetaDegree + 3>, kMaxBetaDegree + 3> g_{};
    std::array<std::array<double, kMaxBetaDegree + 1>, kMaxBetaDegree + 1> b_{};
    int g_degree_ = 0;
};

/// Gauss-Legendre nodes and weights mapped to [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace didolocus
