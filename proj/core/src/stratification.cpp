#include "didolocus/stratification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

namespace didolocus {

// ─── Roots ───────────────────────────────────────────────────────────────────

cplx poly_eval(const std::vector<cplx>& a, cplx z) {
    cplx s = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * z + *it;
    return s;
}

namespace {

std::vector<cplx> trimmed(const std::vector<cplx>& a) {
    std::vector<cplx> out = a;
    double scale = 0;
    for (const auto& c : a) scale = std::max(scale, std::abs(c));
    while (!out.empty() && std::abs(out.back()) <= 1e-14 * scale) out.pop_back();
    return out;
}

}  // namespace

std::vector<cplx> polynomial_roots(const std::vector<cplx>& ascending) {
    const std::vector<cplx> a = trimmed(ascending);
    if (a.empty()) throw Error("identically zero");
    const int n = static_cast<int>(a.size()) - 1;
    if (n == 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[i] / a[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);

    // Newton polishing for well-separated roots; clustered ones are left alone so that a
    // genuine multiple root is not pulled apart.
    std::vector<cplx> da(n);
    for (int i = 1; i <= n; ++i) da[i - 1] = a[i] * static_cast<double>(i);
    for (int i = 0; i < n; ++i) {
        double nearest = INFINITY;
        for (int j = 0; j < n; ++j)
            if (j != i) nearest = std::min(nearest, std::abs(roots[i] - roots[j]));
        if (nearest < 1e-4) continue;
        for (int it = 0; it < 3; ++it) {
            const cplx d = poly_eval(da, roots[i]);
            if (std::abs(d) == 0) break;
            roots[i] -= poly_eval(a, roots[i]) / d;
        }
    }
    // Deterministic order: by argument, then modulus.
    std::sort(roots.begin(), roots.end(), [](cplx p, cplx q) {
        const double ap = std::arg(p), aq = std::arg(q);
        return ap != aq ? ap < aq : std::abs(p) < std::abs(q);
    });
    return roots;
}

int RootReport::circle_root_count() const {
    int c = 0;
    for (const auto& r : roots)
        if (r.on_unit_circle) c += r.multiplicity;
    return c;
}

RootReport circle_roots(const std::vector<cplx>& ascending, double circle_tol, double cluster_tol) {
    const std::vector<cplx> raw = polynomial_roots(ascending);
    RootReport rep;
    rep.degree = static_cast<int>(raw.size());
    std::vector<int> group(raw.size());
    std::iota(group.begin(), group.end(), 0);
    std::function<int(int)> find = [&](int i) { return group[i] == i ? i : group[i] = find(group[i]); };
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t j = i + 1; j < raw.size(); ++j)
            if (std::abs(raw[i] - raw[j]) <= cluster_tol) group[find(static_cast<int>(j))] = find(static_cast<int>(i));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (find(static_cast<int>(i)) != static_cast<int>(i)) continue;
        cplx sum = 0;
        int count = 0;
        for (std::size_t j = 0; j < raw.size(); ++j)
            if (find(static_cast<int>(j)) == static_cast<int>(i)) {
                sum += raw[j];
                ++count;
            }
        PolyRoot r;
        r.z = sum / static_cast<double>(count);
        r.multiplicity = count;
        r.on_unit_circle = std::abs(std::abs(r.z) - 1.0) <= circle_tol;
        rep.roots.push_back(r);
    }
    return rep;
}

double self_inversive_defect(const RootReport& r) {
    double worst = 0;
    for (const auto& a : r.roots) {
        if (std::abs(a.z) == 0) continue;
        const cplx refl = 1.0 / std::conj(a.z);
        double best = INFINITY;
        for (const auto& b : r.roots) best = std::min(best, std::abs(b.z - refl));
        worst = std::max(worst, best);
    }
    return worst;
}

cplx sylvester_resultant(const std::vector<cplx>& p, const std::vector<cplx>& q) {
    const int m = static_cast<int>(p.size()) - 1, n = static_cast<int>(q.size()) - 1;
    const int size = m + n;
    if (size == 0) return 1.0;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(size, size);
    // Rows hold the coefficients in descending order, shifted one column per row.
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) S(r, r + k) = p[m - k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) S(n + r, r + k) = q[n - k];
    return S.partialPivLu().determinant();
}

// ─── Bad sets ────────────────────────────────────────────────────────────────

std::vector<BadSetValue> bad_set_values(const Invariants& inv, FormulaSet set) {
    const TrigPolys tp = build_trig_polys(inv, set);
    const cplx mu = tp.mu, nu = tp.nu, r3 = inv.r3;
    const double am = std::abs(mu), an = std::abs(nu), ar = std::abs(r3);
    std::vector<BadSetValue> out;
    auto push = [&](const char* name, cplx value, double scale) {
        BadSetValue b;
        b.name = name;
        b.value = value;
        b.magnitude = std::abs(value);
        b.relative = scale > 0 ? b.magnitude / scale : 0.0;
        b.vanishes = scale > 0 ? b.relative <= kBadSetTol : true;
        out.push_back(b);
    };
    push("B0", r3, 1.0);
    out.back().vanishes = ar <= kStratTol;
    push("B1", mu, 1.0);
    out.back().vanishes = am <= kStratTol;
    push("B2", 4.0 * mu * mu * std::conj(nu) + nu * nu * nu, 4 * am * am * an + an * an * an);
    const cplx b3a = std::conj(nu) * r3 - 4.0 * mu * std::conj(r3);
    push("B3", 27.0 * nu * nu * nu * r3 * std::conj(r3) * std::conj(r3) + b3a * b3a * b3a,
         27 * an * an * an * ar * ar * ar + std::pow(an * ar + 4 * am * ar, 3));
    push("B4", std::conj(nu) * r3 - mu * std::conj(r3), an * ar + am * ar);
    const double re = (mu * std::conj(nu) * std::conj(nu)).real();
    const double q = 4 * am * am - an * an;
    push("B5", 27 * re * re - q * q * q, 27 * am * am * std::pow(an, 4) + std::pow(4 * am * am + an * an, 3));
    const std::vector<cplx> P = tp.ptilde(), T = tp.t_poly();
    double np = 0, nt = 0;
    for (auto c : P) np += std::norm(c);
    for (auto c : T) nt += std::norm(c);
    push("B6", sylvester_resultant(P, T), std::pow(np, 1.5) * std::pow(nt, 2.0));
    return out;
}

const char* to_string(Stratum s) {
    switch (s) {
        case Stratum::OffC: return "OffC";
        case Stratum::GenericOnC: return "GenericOnC";
        case Stratum::IsolatedTypeA: return "IsolatedTypeA";
        case Stratum::IsolatedTypeB: return "IsolatedTypeB";
        case Stratum::NonGeneric: return "NonGeneric";
    }
    return "?";
}

StratumReport classify(const Invariants& inv, FormulaSet set) {
    StratumReport rep;
    rep.b_values = bad_set_values(inv, set);
    if (inv.abs_r2() > kStratTol) {
        rep.stratum = Stratum::OffC;
        return rep;
    }
    const TrigPolys tp = build_trig_polys(inv, set);
    if (inv.abs_r3() <= kStratTol) rep.flags.push_back("B0");
    if (std::abs(tp.mu) <= kStratTol) rep.flags.push_back("B1");
    if (inv.abs_r3() > kStratTol) rep.t = circle_roots(tp.t_poly());
    const auto pt = tp.ptilde();
    bool p_zero = true;
    for (auto c : pt) p_zero = p_zero && std::abs(c) == 0.0;
    if (!p_zero) rep.ptilde = circle_roots(pt);
    if (!rep.flags.empty()) {
        rep.stratum = Stratum::NonGeneric;
        return rep;
    }

    int simple_on = 0, double_on = 0, higher_on = 0;
    int common_simple = 0, common_multiple = 0;
    for (const auto& r : rep.ptilde.roots) {
        if (!r.on_unit_circle) continue;
        if (r.multiplicity == 1) ++simple_on;
        else if (r.multiplicity == 2) ++double_on;
        else ++higher_on;
        for (const auto& t : rep.t.roots) {
            if (std::abs(t.z - r.z) <= kClusterTol) {
                rep.common_roots.push_back(r.z);
                rep.ptilde.common_roots_with_T.push_back(r.z);
                (r.multiplicity == 1 ? common_simple : common_multiple)++;
            }
        }
    }
    const int on = rep.ptilde.circle_root_count();
    const int total = rep.ptilde.degree;
    if (higher_on == 0 && double_on == 0 && rep.common_roots.empty()) {
        rep.stratum = Stratum::GenericOnC;
    } else if (higher_on == 0 && double_on == 1 && rep.common_roots.empty() && on == total) {
        rep.stratum = Stratum::IsolatedTypeA;
    } else if (higher_on == 0 && double_on == 0 && common_simple == 1 && common_multiple == 0) {
        rep.stratum = Stratum::IsolatedTypeB;
    } else {
        rep.stratum = Stratum::NonGeneric;
        for (const auto& b : rep.b_values)
            if (b.name != "B0" && b.name != "B1" && b.vanishes) rep.flags.push_back(b.name);
        if (rep.flags.empty()) rep.flags.push_back("unclassified");
    }
    return rep;
}

std::string stratum_json(const StratumReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["stratum"] = to_string(r.stratum);
    ordered_json b = ordered_json::object();
    for (const auto& v : r.b_values) b[v.name] = {v.value.real(), v.value.imag()};
    j["b_values"] = b;
    auto roots = [](const RootReport& rr) {
        ordered_json a = ordered_json::array();
        for (const auto& x : rr.roots)
            a.push_back({{"re", x.z.real()},
                         {"im", x.z.imag()},
                         {"multiplicity", x.multiplicity},
                         {"on_unit_circle", x.on_unit_circle}});
        return a;
    };
    j["ptilde_roots"] = roots(r.ptilde);
    j["t_roots"] = roots(r.t);
    ordered_json c = ordered_json::array();
    for (const auto& z : r.common_roots) c.push_back({z.real(), z.imag()});
    j["common_roots"] = c;
    j["flags"] = r.flags;
    return j.dump(2);
}

// ─── Family sweep ────────────────────────────────────────────────────────────

SweepResult sweep_family(const std::function<BetaJet(double)>& family, double lambda0, double lambda1, int steps) {
    if (steps < 2) throw Error("sweep needs at least two steps");
    if (!std::isfinite(lambda0) || !std::isfinite(lambda1)) throw Error("sweep range must be finite");
    SweepResult res;
    auto r2_of = [&](double lam) { return extract_invariants(family(lam)).abs_r2(); };
    for (int i = 0; i < steps; ++i) {
        const double lam = lambda0 + (lambda1 - lambda0) * i / (steps - 1);
        const Invariants inv = extract_invariants(family(lam));
        res.samples.push_back({lam, inv.abs_r2(), classify(inv).stratum});
    }
    for (int i = 0; i < steps; ++i) {
        const double here = res.samples[i].abs_r2;
        const bool left_ok = i == 0 || res.samples[i - 1].abs_r2 > here;
        const bool right_ok = i == steps - 1 || res.samples[i + 1].abs_r2 >= here;
        if (!left_ok || !right_ok) continue;
        // Bisection on the slope of |r2|^2 inside the neighbouring interval.
        double lo = res.samples[std::max(i - 1, 0)].lambda, hi = res.samples[std::min(i + 1, steps - 1)].lambda;
        auto slope = [&](double lam) {
            const double d = 1e-7 * std::max(1.0, std::abs(hi - lo));
            const double a = r2_of(lam + d), b = r2_of(lam - d);
            return a * a - b * b;
        };
        double best = res.samples[i].lambda;
        if (here > kStratTol) {
            for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                (slope(mid) > 0 ? hi : lo) = mid;
            }
            best = 0.5 * (lo + hi);
        }
        if (r2_of(best) <= kStratTol) {
            res.c_crossings.push_back(best);
            res.crossing_strata.push_back(classify(extract_invariants(family(best))).stratum);
        }
    }
    return res;
}

}  // namespace didolocus
