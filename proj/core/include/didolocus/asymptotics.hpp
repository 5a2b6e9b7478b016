/// Closed-form expansion of the first conjugate locus
///   CL(phi, h) = sum_i f_i(phi) h^i,  w = eps * pi * h^2,
/// with the trigonometric polynomials P, T, Tc, Psi and the self-intersection
/// predictions derived from them.
///
/// Two formula sets are provided. `Printed` transcribes the published expressions
/// term by term. `Verified` carries the forms reproduced by direct integration of the
/// geodesic flow; it differs in the sign conventions of the r1 and b44 terms, the phi
/// labelling of f5, the epsilon-parities of f5 and f7, and the absence of the d7/2 part
/// of f7. `formula_audit` reports both side by side.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "didolocus/expmap_conjugate.hpp"
#include "didolocus/metric_model.hpp"

namespace didolocus {

enum class FormulaSet { Printed, Verified };

const char* to_string(FormulaSet s);

using Vec2 = std::array<double, 2>;

inline double wedge(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Finite sum of amp * cos(k phi + phase), differentiated exactly.
class TrigSum {
public:
    struct Term {
        double amp;
        int k;
        double phase;
    };

    void add_cos(double amp, int k, double phase = 0.0);
    void add_sin(double amp, int k, double phase = 0.0);
    void add(const TrigSum& o, double scale = 1.0);

    double eval(double phi, int deriv = 0) const;
    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
};

struct VecTrig {
    TrigSum x, y;
    Vec2 eval(double phi, int deriv = 0) const { return {x.eval(phi, deriv), y.eval(phi, deriv)}; }
    void add(const VecTrig& o, double scale = 1.0) {
        x.add(o.x, scale);
        y.add(o.y, scale);
    }
};

/// Strict threshold for "r2 = 0" membership, shared with the stratifier.
inline constexpr double kStratTol = 1e-9;

class FSeries {
public:
    int epsilon = 1;
    FormulaSet set = FormulaSet::Printed;
    /// r2 = 0 within kStratTol; f6 and f7 are only defined there.
    bool on_c = false;

    /// f_i or its derivative in phi, i in 4..7. Requesting f7 off C throws
    /// "f7 formula valid only on C".
    Vec2 f(int i, double phi, int deriv = 0) const;
    const VecTrig& component(int i) const;
    /// Highest index usable for this germ: 7 on C, 5 off C.
    int order() const { return on_c ? 7 : 5; }

    VecTrig f4, f5, f6, f7;
};

FSeries build_fseries(const Invariants& inv, int epsilon, FormulaSet set = FormulaSet::Printed);

/// (sum_{i=4}^{order} f_i(phi) h^i, eps pi h^2). Off C the sum stops at f5.
std::array<double, 3> cl_expansion(const FSeries& fs, double phi, double h);

/// Section of the truncated expansion on a uniform phi grid.
PlanarCurve asymptotic_section(const FSeries& fs, double h, int n_phi);

/// Power of h carrying the first phi-dependent term: 5 off C, 6 on C (f5 vanishes there).
int leading_shape_order(const FSeries& fs);

/// (CL - f4 h^4) / h^lead and its phi-derivative. f4 does not depend on phi, so this is a
/// translation and a scaling of the section; cusps and crossing angles are unchanged,
/// while the shape stays resolvable in double precision for arbitrarily small h.
void normalized_expansion(const FSeries& fs, double phi, double h, Vec2& pos, Vec2& tangent);

/// Section of normalized_expansion on a uniform phi grid. `level` keeps the true w.
PlanarCurve normalized_section(const FSeries& fs, double h, int n_phi);

struct TrigPolys {
    FormulaSet set = FormulaSet::Printed;
    double A = 0, B = 0, C = 0, D = 0;
    cplx mu, nu;
    cplx r3;
    double abs_r3 = 0, theta3 = 0;

    double P(double phi, int deriv = 0) const;
    double Tc(double phi, int deriv = 0) const;
    double Psi(double phi) const;
    /// Coefficients in ascending powers: mubar, nubar, 0, nu, mu.
    std::vector<cplx> ptilde() const;
    /// Coefficients in ascending powers: r3bar, 0, 0, r3.
    std::vector<cplx> t_poly() const;
};

TrigPolys build_trig_polys(const Invariants& inv, FormulaSet set = FormulaSet::Printed);

struct IdentityCheck {
    std::string name;
    double max_residual = 0;
    double max_relative = 0;
    int grid_size = 0;
    /// Least-squares ratio lhs/rhs; 1 when the identity holds.
    double factor = 1;
    bool holds = false;
};

/// Evaluates the wedge identities and the d7 identity on a phi grid. Requires r2 = 0.
std::vector<IdentityCheck> wedge_identity_residuals(const Invariants& inv, const std::vector<double>& phi_grid,
                                                    FormulaSet set = FormulaSet::Printed, double rel_tol = 1e-8);

enum class BranchKind { Cusp, SimpleRoot, DoubleRoot, F7Zero, Collision };

const char* to_string(BranchKind k);

/// One predicted branch of self-intersection pairs (phi, phi + pi + delta).
///  Cusp:       phi = phi0 - delta/2,   h = coefficient * delta^3
///  SimpleRoot: phi = phi0 - lambda h,  delta = 2 lambda h,  coefficient = lambda
struct IsoselfBranch {
    BranchKind kind;
    double phi0 = 0;
    double coefficient = 0;
    std::string note;
};

struct IsoselfPrediction {
    bool generic = true;
    std::string note;
    std::vector<IsoselfBranch> branches;
};

/// Errors: r2 != 0 -> "no Isoself off C"; r3 = 0 -> "stratum B₀, out of generic scope".
IsoselfPrediction isoself_predict(const Invariants& inv, int epsilon, FormulaSet set = FormulaSet::Printed);

/// Roots of P on [0, pi) with multiplicities, obtained from the circle roots of Ptilde.
struct AngleRoot {
    double phi;
    int multiplicity;
};
std::vector<AngleRoot> p_roots(const TrigPolys& tp);

}  // namespace didolocus
