#include "didolocus/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "didolocus/stratification.hpp"

namespace didolocus {

using std::numbers::pi;

const char* to_string(FormulaSet s) { return s == FormulaSet::Printed ? "printed" : "verified"; }

// ─── TrigSum ─────────────────────────────────────────────────────────────────

void TrigSum::add_cos(double amp, int k, double phase) {
    if (amp != 0.0) terms_.push_back({amp, k, phase});
}

void TrigSum::add_sin(double amp, int k, double phase) { add_cos(amp, k, phase - pi / 2); }

void TrigSum::add(const TrigSum& o, double scale) {
    for (const auto& t : o.terms_) add_cos(t.amp * scale, t.k, t.phase);
}

double TrigSum::eval(double phi, int deriv) const {
    double s = 0;
    for (const auto& t : terms_) {
        if (deriv > 0 && t.k == 0) continue;
        s += t.amp * std::pow(static_cast<double>(t.k), deriv) * std::cos(t.k * phi + t.phase + deriv * pi / 2);
    }
    return s;
}

// ─── f-series ────────────────────────────────────────────────────────────────

namespace {

// The part of f7 that is odd under phi -> phi + pi and free of the d7 terms, for given
// conventions of theta1 and b44 (the two sets differ exactly there).
VecTrig f7_core(const Beta4Coefficients& b4, double r1sq, double th1, double b44) {
    const double a = b4.a44, c = b4.c44, d = b4.d44, R = r1sq, k = 3 * pi;
    VecTrig f;
    f.x.add_cos(-21 * c * k, 1);
    f.x.add_cos((35 * a - 7 * c) * k, 3);
    f.x.add_cos(21 * a * k, 5);
    f.x.add_cos(3 * R * k, 1, -2 * th1);
    f.x.add_cos(R * k, 3, -2 * th1);
    f.x.add_sin(21 * d * k, 1);
    f.x.add_sin((-35 * b44 + 7 * d) * k, 3);
    f.x.add_sin(-21 * b44 * k, 5);

    f.y.add_cos(21 * d * k, 1);
    f.y.add_cos((-35 * b44 - 7 * d) * k, 3);
    f.y.add_cos(21 * b44 * k, 5);
    f.y.add_sin(21 * c * k, 1);
    f.y.add_sin((-35 * a - 7 * c) * k, 3);
    f.y.add_sin(21 * a * k, 5);
    f.y.add_sin(-3 * R * k, 1, -2 * th1);
    f.y.add_sin(R * k, 3, -2 * th1);
    return f;
}

// d7 = -144 pi^2 |r1|^2 sin(2(phi - theta1)) (cos phi, sin phi), expanded by product-to-sum.
VecTrig d7_terms(double r1sq, double th1) {
    const double k = -72 * pi * pi * r1sq;
    VecTrig d;
    d.x.add_sin(k, 3, -2 * th1);
    d.x.add_sin(k, 1, -2 * th1);
    d.y.add_cos(k, 1, -2 * th1);
    d.y.add_cos(-k, 3, -2 * th1);
    return d;
}

}  // namespace

Vec2 FSeries::f(int i, double phi, int deriv) const { return component(i).eval(phi, deriv); }

const VecTrig& FSeries::component(int i) const {
    switch (i) {
        case 4: return f4;
        case 5: return f5;
        case 6: return f6;
        case 7:
            if (!on_c) throw Error("f7 formula valid only on C");
            return f7;
        default: throw Error("f" + std::to_string(i) + " is not implemented");
    }
}

FSeries build_fseries(const Invariants& inv, int epsilon, FormulaSet set) {
    if (epsilon != 1 && epsilon != -1) throw Error("epsilon must be +1 or -1");
    FSeries fs;
    fs.epsilon = epsilon;
    fs.set = set;
    fs.on_c = inv.abs_r2() <= kStratTol;
    const double e = epsilon;
    const double ar1 = inv.abs_r1(), th1 = inv.theta1();
    const double ar2 = inv.abs_r2(), th2 = inv.theta2();
    const double ar3 = inv.abs_r3(), th3 = inv.theta3();
    const double R = std::norm(inv.r1);
    const bool printed = set == FormulaSet::Printed;

    // f4 is constant in phi.
    const double s1 = printed ? -std::sin(th1) : std::sin(th1);
    fs.f4.x.add_cos(e * 3 * pi * ar1 * s1, 0);
    fs.f4.y.add_cos(e * 3 * pi * ar1 * std::cos(th1), 0);

    if (printed) {
        const double k = e * 5 * pi * ar2;
        fs.f5.x.add_cos(3 * k, 1, -th2);
        fs.f5.x.add_cos(k, 3, -th2);
        fs.f5.y.add_sin(3 * k, 1, -th2);
        fs.f5.y.add_sin(-k, 3, -th2);
    } else {
        // The printed curve traversed as phi -> pi - phi, with no sign change under epsilon.
        const double k = 5 * pi * ar2;
        fs.f5.x.add_cos(-3 * k, 1, th2);
        fs.f5.x.add_cos(-k, 3, th2);
        fs.f5.y.add_sin(3 * k, 1, th2);
        fs.f5.y.add_sin(-k, 3, th2);
    }

    {
        const double k = e * pi / 2;
        const double b0r1 = 31 * inv.b0 * ar1;
        fs.f6.x.add_cos(k * -25 * inv.v2(), 0);
        fs.f6.x.add_cos(k * 90 * ar3, 2, th3);
        fs.f6.x.add_cos(k * 45 * ar3, 4, th3);
        fs.f6.x.add_cos(k * (printed ? b0r1 : -b0r1) * std::sin(th1), 0);
        fs.f6.y.add_cos(k * -25 * inv.v1(), 0);
        fs.f6.y.add_sin(k * -90 * ar3, 2, th3);
        fs.f6.y.add_sin(k * 45 * ar3, 4, th3);
        fs.f6.y.add_cos(k * -b0r1 * std::cos(th1), 0);
    }

    if (printed) {
        VecTrig plus = f7_core(inv.beta4, R, th1, inv.beta4.b44);
        const VecTrig d7 = d7_terms(R, th1);
        plus.add(d7, 0.5);
        if (epsilon == 1) {
            fs.f7 = plus;
        } else {
            // Printed relation f7 + f7^- = d7.
            fs.f7 = d7;
            fs.f7.add(plus, -1.0);
        }
    } else {
        fs.f7 = f7_core(inv.beta4, R, -th1, -inv.beta4.b44);
    }
    return fs;
}

std::array<double, 3> cl_expansion(const FSeries& fs, double phi, double h) {
    double x = 0, y = 0, hp = h * h * h;
    for (int i = 4; i <= fs.order(); ++i) {
        hp *= h;
        const Vec2 v = fs.component(i).eval(phi);
        x += v[0] * hp;
        y += v[1] * hp;
    }
    return {x, y, fs.epsilon * pi * h * h};
}

PlanarCurve asymptotic_section(const FSeries& fs, double h, int n_phi) {
    if (n_phi < 1) throw Error("n_phi must be positive");
    PlanarCurve c;
    c.level = fs.epsilon * pi * h * h;
    c.epsilon = fs.epsilon;
    for (int k = 0; k < n_phi; ++k) {
        const double phi = 2 * pi * k / n_phi;
        const auto p = cl_expansion(fs, phi, h);
        c.samples.push_back({phi, p[0], p[1]});
    }
    return c;
}

int leading_shape_order(const FSeries& fs) { return fs.on_c ? 6 : 5; }

void normalized_expansion(const FSeries& fs, double phi, double h, Vec2& pos, Vec2& tangent) {
    pos = {0, 0};
    tangent = {0, 0};
    double hp = 1;
    for (int i = leading_shape_order(fs); i <= fs.order(); ++i) {
        const Vec2 v = fs.component(i).eval(phi, 0), d = fs.component(i).eval(phi, 1);
        pos[0] += v[0] * hp;
        pos[1] += v[1] * hp;
        tangent[0] += d[0] * hp;
        tangent[1] += d[1] * hp;
        hp *= h;
    }
}

PlanarCurve normalized_section(const FSeries& fs, double h, int n_phi) {
    if (n_phi < 1) throw Error("n_phi must be positive");
    PlanarCurve c;
    c.level = fs.epsilon * pi * h * h;
    c.epsilon = fs.epsilon;
    Vec2 pos, tan;
    for (int k = 0; k < n_phi; ++k) {
        const double phi = 2 * pi * k / n_phi;
        normalized_expansion(fs, phi, h, pos, tan);
        c.samples.push_back({phi, pos[0], pos[1]});
    }
    return c;
}

// ─── Trigonometric polynomials ───────────────────────────────────────────────

TrigPolys build_trig_polys(const Invariants& inv, FormulaSet set) {
    TrigPolys tp;
    tp.set = set;
    if (set == FormulaSet::Printed) {
        tp.A = inv.A;
        tp.B = inv.B;
        tp.C = inv.C;
        tp.D = inv.D;
    } else {
        // -7d44 cos2phi - 7b44 cos4phi - 7c44 sin2phi + 7a44 sin4phi + |r1|^2 sin(2phi + 2theta1)
        const double R = std::norm(inv.r1), t1 = inv.theta1();
        tp.A = -7 * inv.beta4.d44 + R * std::sin(2 * t1);
        tp.B = -7 * inv.beta4.c44 + R * std::cos(2 * t1);
        tp.C = -7 * inv.beta4.b44;
        tp.D = 7 * inv.beta4.a44;
    }
    tp.nu = cplx(tp.A, -tp.B) / 2.0;
    tp.mu = cplx(tp.C, -tp.D) / 2.0;
    tp.r3 = inv.r3;
    tp.abs_r3 = inv.abs_r3();
    tp.theta3 = inv.theta3();
    return tp;
}

double TrigPolys::P(double phi, int deriv) const {
    auto term = [&](double amp, int k, double base) {
        return amp * std::pow(static_cast<double>(k), deriv) * std::cos(k * phi + base + deriv * pi / 2);
    };
    return term(A, 2, 0) + term(B, 2, -pi / 2) + term(C, 4, 0) + term(D, 4, -pi / 2);
}

double TrigPolys::Tc(double phi, int deriv) const {
    return abs_r3 * std::pow(3.0, deriv) * std::sin(3 * phi + theta3 + deriv * pi / 2);
}

double TrigPolys::Psi(double phi) const { return 1080 * pi * pi * Tc(phi) * P(phi); }

std::vector<cplx> TrigPolys::ptilde() const { return {std::conj(mu), std::conj(nu), 0.0, nu, mu}; }

std::vector<cplx> TrigPolys::t_poly() const { return {std::conj(r3), 0.0, 0.0, r3}; }

std::vector<AngleRoot> p_roots(const TrigPolys& tp) {
    // P(phi) = Re-part form of z^-2 Ptilde(z) with z = e^{2 i phi}.
    const RootReport rep = circle_roots(tp.ptilde());
    std::vector<AngleRoot> out;
    for (const auto& r : rep.roots) {
        if (!r.on_unit_circle) continue;
        double phi = 0.5 * std::arg(r.z);
        if (phi < 0) phi += pi;
        if (phi >= pi) phi -= pi;
        out.push_back({phi, r.multiplicity});
    }
    std::sort(out.begin(), out.end(), [](const AngleRoot& a, const AngleRoot& b) { return a.phi < b.phi; });
    return out;
}

// ─── Wedge identities ────────────────────────────────────────────────────────

std::vector<IdentityCheck> wedge_identity_residuals(const Invariants& inv, const std::vector<double>& grid,
                                                    FormulaSet set, double rel_tol) {
    if (inv.abs_r2() > kStratTol) throw Error("wedge identities require r2 = 0");
    const FSeries fp = build_fseries(inv, 1, set), fm = build_fseries(inv, -1, set);
    const TrigPolys tp = build_trig_polys(inv, set);
    const double ar3 = inv.abs_r3(), th3 = inv.theta3(), th1 = inv.theta1(), R = std::norm(inv.r1);

    auto finish = [&](IdentityCheck c, const std::vector<double>& lhs, const std::vector<double>& rhs) {
        double ml = 0, mr = 0, num = 0, den = 0;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            c.max_residual = std::max(c.max_residual, std::abs(lhs[i] - rhs[i]));
            ml = std::max(ml, std::abs(lhs[i]));
            mr = std::max(mr, std::abs(rhs[i]));
            num += lhs[i] * rhs[i];
            den += rhs[i] * rhs[i];
        }
        const double scale = std::max(ml, mr);
        c.max_relative = scale > 0 ? c.max_residual / scale : 0.0;
        c.factor = den > 0 ? num / den : (ml == 0 ? 1.0 : INFINITY);
        c.holds = c.max_relative <= rel_tol;
        return c;
    };

    std::vector<IdentityCheck> out;
    const int n = static_cast<int>(grid.size());
    {
        std::vector<double> l, r;
        for (double p : grid) {
            l.push_back(wedge(fp.f(6, p, 1), fp.f(7, p, 1)));
            r.push_back(12960 * std::pow(pi, 3) * ar3 * std::sin(3 * p + th3) * R * std::sin(2 * (p - th1)));
        }
        out.push_back(finish({"df6^df7 = 12960pi^3|r3|sin(3phi+theta3)|r1|^2 sin2(phi-theta1)", 0, 0, n}, l, r));
    }
    {
        std::vector<double> l, r;
        for (double p : grid) {
            l.push_back(wedge(fp.f(6, p, 1), fp.f(7, p)));
            r.push_back(tp.Psi(p));
        }
        out.push_back(finish({"df6^f7 = 1080pi^2 Tc P = Psi", 0, 0, n}, l, r));
    }
    {
        std::vector<double> l, r;
        for (double p : grid) {
            l.push_back(wedge(fp.f(6, p, 1), fp.f(6, p, 2)));
            const double s = std::sin(3 * p + th3);
            r.push_back(32400 * ar3 * ar3 * pi * pi * s * s);
        }
        out.push_back(finish({"df6^d2f6 = 32400|r3|^2 pi^2 sin^2(3phi+theta3)", 0, 0, n}, l, r));
    }
    {
        // The cusp at phi = -theta3/3 plays the role of phi = 0 in the theta3 = 0 frame.
        const double pc = -th3 / 3;
        std::vector<double> l{wedge(fp.f(6, pc, 3), fp.f(6, pc, 2))};
        std::vector<double> r{-583200 * ar3 * pi * pi};
        out.push_back(finish({"d3f6^d2f6 at cusp = -583200|r3|pi^2", 0, 0, 1}, l, r));
    }
    {
        std::vector<double> l, r;
        const VecTrig d7 = [&] {
            VecTrig d;
            d.x.add_sin(-72 * pi * pi * R, 3, -2 * th1);
            d.x.add_sin(-72 * pi * pi * R, 1, -2 * th1);
            d.y.add_cos(-72 * pi * pi * R, 1, -2 * th1);
            d.y.add_cos(72 * pi * pi * R, 3, -2 * th1);
            return d;
        }();
        for (double p : grid) {
            const Vec2 a = fp.f(7, p), b = fm.f(7, p), d = d7.eval(p);
            l.push_back(a[0] + b[0]);
            r.push_back(d[0]);
            l.push_back(a[1] + b[1]);
            r.push_back(d[1]);
        }
        out.push_back(finish({"f7 + f7- = d7", 0, 0, n}, l, r));
    }
    return out;
}

// ─── Self-intersection predictions ───────────────────────────────────────────

const char* to_string(BranchKind k) {
    switch (k) {
        case BranchKind::Cusp: return "cusp";
        case BranchKind::SimpleRoot: return "simple P-root";
        case BranchKind::DoubleRoot: return "double P-root";
        case BranchKind::F7Zero: return "f7 = 0 at P-root";
        case BranchKind::Collision: return "collision";
    }
    return "?";
}

IsoselfPrediction isoself_predict(const Invariants& inv, int epsilon, FormulaSet set) {
    if (inv.abs_r2() > kStratTol) throw Error("no Isoself off C");
    if (inv.abs_r3() <= kStratTol) throw Error("stratum B₀, out of generic scope");
    const FSeries fs = build_fseries(inv, epsilon, set);
    const TrigPolys tp = build_trig_polys(inv, set);
    IsoselfPrediction out;
    if (std::abs(tp.mu) <= kStratTol && std::abs(tp.nu) <= kStratTol) {
        out.generic = false;
        out.note = "P identically zero (mu = nu = 0), non-generic";
        return out;
    }

    const double th3 = inv.theta3();
    std::vector<double> cusps;
    for (int k = 0; k < 3; ++k) {
        double c = k * pi / 3 - th3 / 3;
        c = std::fmod(c, pi);
        if (c < 0) c += pi;
        cusps.push_back(c);
    }
    std::sort(cusps.begin(), cusps.end());
    for (double c : cusps) {
        const double num = wedge(fs.f(6, c, 3), fs.f(6, c, 2));
        const double den = wedge(fs.f(7, c), fs.f(6, c, 2));
        IsoselfBranch b{BranchKind::Cusp, c, den != 0 ? -num / (48 * den) : INFINITY,
                        "phi = phi0 - delta/2, h = K delta^3"};
        out.branches.push_back(b);
    }

    // Scales for the degeneracy tests.
    double f7_scale = 0, p_scale = std::abs(tp.A) + std::abs(tp.B) + std::abs(tp.C) + std::abs(tp.D);
    for (int k = 0; k < 64; ++k) {
        const Vec2 v = fs.f(7, pi * k / 64);
        f7_scale = std::max(f7_scale, std::hypot(v[0], v[1]));
    }
    for (const auto& r : p_roots(tp)) {
        const double phi0 = r.phi;
        double cusp_dist = INFINITY;
        for (double c : cusps) {
            const double d = std::abs(std::remainder(phi0 - c, pi));
            cusp_dist = std::min(cusp_dist, d);
        }
        IsoselfBranch b{BranchKind::SimpleRoot, phi0, 0, ""};
        const Vec2 f7v = fs.f(7, phi0);
        if (cusp_dist <= 1e-7) {
            b.kind = BranchKind::Collision;
            b.note = "collision case: no self-intersection from the collided root";
        } else if (r.multiplicity > 1 || std::abs(tp.P(phi0, 1)) <= 1e-7 * p_scale) {
            b.kind = BranchKind::DoubleRoot;
            b.note = "double root of P: isolated type-a configuration";
        } else if (std::hypot(f7v[0], f7v[1]) <= 1e-9 * f7_scale) {
            b.kind = BranchKind::F7Zero;
            b.note = "f7 vanishes at the root: delta ~ h^3 law, needs f9 (not implemented)";
        } else {
            const double num = wedge(f7v, fs.f(6, phi0, 2));
            const double den = wedge(fs.f(6, phi0, 1), fs.f(6, phi0, 2));
            b.coefficient = num / den;
            b.note = "phi = phi0 - lambda h, delta = 2 lambda h";
        }
        out.branches.push_back(b);
    }
    for (const auto& b : out.branches)
        if (b.kind != BranchKind::Cusp && b.kind != BranchKind::SimpleRoot) out.generic = false;
    return out;
}

}  // namespace didolocus
