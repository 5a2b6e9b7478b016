// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--golden DIR] [--write-golden] [--only N]...
//
// Golden artifacts (criteria 1, 3 and 7) are regenerated twice per run for the
// determinism check and diffed byte for byte against DIR.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "support.hpp"

using namespace testing_support;
namespace fsys = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Artifacts = std::map<std::string, std::string>;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int transversal_count(const std::vector<Crossing>& xs) {
    return static_cast<int>(std::count_if(xs.begin(), xs.end(), [](const Crossing& c) { return c.transversal; }));
}

bool in_s123(const std::string& m) { return m == "S1" || m == "S2" || m == "S3"; }

// Level h of the section w = c for c = 1e-8.
const double kSmallH = std::sqrt(1e-8 / pi);
// Level used for numerical sections on C; see the README for how it was chosen.
constexpr double kNumericH = 0.02;

// ── Criterion 1 ─────────────────────────────────────────────────────────────

Artifacts artifacts_heisenberg() {
    const MetricModel m = metric({});
    Artifacts a;
    for (double rho : {0.3, 1.0}) {
        LaunchSpec l;
        l.phi = 0.4;
        l.rho = rho;
        l.s_max = 2 * pi * rho;
        a["c1_trajectory_rho" + fmt("%g", rho) + ".csv"] = trajectory_csv(integrate(m, l, false));
    }
    a["c1_conjugate.csv"] = conjugate_csv({first_conjugate(m, 0.4, 0.3), first_conjugate(m, 0.4, 1.0)});
    return a;
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const MetricModel m = metric({});
    double traj = 0, tc = 0, point = 0;
    for (double rho : {0.3, 1.0})
        for (double phi : {0.0, 0.4, 2.5}) {
            LaunchSpec l;
            l.phi = phi;
            l.rho = rho;
            l.s_max = 2 * pi * rho;
            for (const auto& st : integrate(m, l, false).samples) {
                const double t = st.s / rho;
                const double x = rho * 2 * std::sin(t / 2) * std::cos(phi - t / 2);
                const double y = rho * 2 * std::sin(t / 2) * std::sin(phi - t / 2);
                const double w = rho * rho * 0.5 * (t - std::sin(t));
                traj = std::max({traj, std::abs(st.x - x), std::abs(st.y - y), std::abs(st.w - w)});
            }
            const ConjugatePoint cp = first_conjugate(m, phi, rho);
            tc = std::max(tc, std::abs(cp.t_c - 2 * pi));
            point = std::max({point, std::abs(cp.x), std::abs(cp.y), std::abs(cp.w - pi * rho * rho)});
        }
    const double dt = seconds_since(t0);
    return {traj <= 1e-8 && tc <= 1e-7 && point <= 1e-7 && dt < 1,
            "trajectory err " + fmt("%.2e", traj) + " (<= 1e-8), |t_c - 2pi| " + fmt("%.2e", tc) +
                " (<= 1e-7), point err " + fmt("%.2e", point) + " (<= 1e-7), " + fmt("%.2f", dt) + " s (< 1 s)"};
}

// ── Criterion 2 ─────────────────────────────────────────────────────────────

Outcome criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (double b0 : {0.02, 0.05})
        for (int eps : {1, -1}) {
            // t_c = s_c / rho is signed, so the unperturbed value is 2 pi eps.
            // g(rho) = (t_c - 2 pi eps) / rho^2 = g0 + a rho^2 + b rho^4; eliminate a and b.
            std::vector<double> g;
            for (double rho : {0.1, 0.05, 0.025}) {
                const ConjugatePoint cp = first_conjugate(metric({{0, 0, b0}}), 0.3, eps * rho);
                g.push_back((cp.t_c - 2 * pi * eps) / (rho * rho));
            }
            const double r1 = (4 * g[1] - g[0]) / 3, r2 = (4 * g[2] - g[1]) / 3;
            const double g0 = (16 * r2 - r1) / 15;
            const double target = -6 * pi * eps * b0;
            const double rel = std::abs(g0 / target - 1);
            ok = ok && rel <= 0.02;
            detail += "b0=" + fmt("%g", b0) + " eps=" + fmt("%+.0f", eps) + ": " + fmt("%.6f", g0) + " vs " +
                      fmt("%.6f", target) + " (rel " + fmt("%.1e", rel) + "); ";
        }
    const double dt = seconds_since(t0);
    return {ok && dt < 30, detail + "tolerance 2%, " + fmt("%.2f", dt) + " s (< 30 s)"};
}

// ── Criterion 3 ─────────────────────────────────────────────────────────────

PlanarCurve f4_section(double h) { return conjugate_section(metric({{1, 0, 0.3}}), pi * h * h, 24); }

Artifacts artifacts_f4() { return {{"c3_section_h0.05.csv", section_csv(f4_section(0.05))}}; }

Outcome criterion3() {
    const double h = 0.05;
    const PlanarCurve s = f4_section(h), coarse = f4_section(2 * h);
    double lo = INFINITY, hi = 0, mx = 0, my = 0, mean_coarse = 0;
    for (const auto& q : s.samples) {
        const double n = std::hypot(q.x, q.y) / std::pow(h, 4);
        lo = std::min(lo, n);
        hi = std::max(hi, n);
        mx += q.x / std::pow(h, 4) / s.samples.size();
        my += q.y / std::pow(h, 4) / s.samples.size();
    }
    for (const auto& q : coarse.samples) mean_coarse += std::hypot(q.x, q.y) / coarse.samples.size();
    const double mean = std::hypot(mx, my);
    const double spread = (hi - lo) / mean;
    const double target = 3 * pi * 0.3;
    const double err = std::hypot(mx, my - target) / target;
    double mean_fine = 0;
    for (const auto& q : s.samples) mean_fine += std::hypot(q.x, q.y) / s.samples.size();
    const double ratio = mean_coarse / mean_fine;
    const double ratio_err = std::abs(ratio / 16 - 1);
    return {spread <= 0.05 && err <= 0.05 && ratio_err <= 0.10,
            "CL/h^4 spread " + fmt("%.1e", spread) + " (<= 5%), mean (" + fmt("%.5f", mx) + ", " + fmt("%.5f", my) +
                ") vs (0, " + fmt("%.5f", target) + ") rel " + fmt("%.1e", err) + " (<= 5%), |CL(0.1)|/|CL(0.05)| = " +
                fmt("%.4f", ratio) + " vs 16 (" + fmt("%.1e", ratio_err) + " <= 10%)"};
}

// ── Criterion 4 ─────────────────────────────────────────────────────────────

Outcome criterion4() {
    const MetricModel m = metric({{2, 0, 0.2}, {0, 2, -0.2}});
    const auto rows = contact_residuals(m, build_fseries(m.inv(), 1, FormulaSet::Verified), {0.1, 0.05}, 180);
    const auto printed = contact_residuals(m, build_fseries(m.inv(), 1, FormulaSet::Printed), {0.1, 0.05}, 180);
    int cusps_ok = 0;
    std::string cusp_counts;
    for (double h : {0.1, 0.05}) {
        const std::size_t n = detect_cusps(conjugate_section(m, pi * h * h, 360)).params.size();
        cusps_ok += n == 4;
        cusp_counts += fmt("%.0f", static_cast<double>(n)) + " ";
    }
    // An O(h^5) residual would double the scaled value when h halves.
    const double growth = rows[1].scaled / rows[0].scaled;
    const bool bounded = std::isfinite(growth) && growth <= 1.5;
    return {cusps_ok == 2 && bounded,
            "cusps at h=0.1,0.05: " + cusp_counts + "(4 each); residual/h^6 = " + fmt("%.3e", rows[0].scaled) + ", " +
                fmt("%.3e", rows[1].scaled) + " (growth " + fmt("%.3f", growth) +
                " <= 1.5); curve distance with printed f5 " + fmt("%.2e", printed[1].deviation) +
                ", pointwise " + fmt("%.2e", printed[1].pointwise) + " (printed f5 relabels phi)"};
}

// ── Criterion 5 ─────────────────────────────────────────────────────────────

Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> grid;
    for (int k = 0; k < 720; ++k) grid.push_back(2 * pi * k / 720);
    std::mt19937_64 rng(505);
    std::map<std::string, int> holds, holds_verified;
    std::map<std::string, double> worst;
    double cusp_factor_dev = 0, cusp_factor_lo = INFINITY, cusp_factor_hi = 0;
    std::string cusp_name;
    const int sets = 100;
    for (int t = 0; t < sets; ++t) {
        const Invariants inv = random_on_c(rng);
        for (const auto& c : wedge_identity_residuals(inv, grid, FormulaSet::Printed)) {
            holds[c.name] += c.holds;
            worst[c.name] = std::max(worst[c.name], c.max_relative);
            if (c.name.rfind("d3f6^d2f6", 0) == 0) {
                cusp_name = c.name;
                cusp_factor_dev = std::max(cusp_factor_dev, std::abs(c.factor / inv.abs_r3() - 1));
                cusp_factor_lo = std::min(cusp_factor_lo, c.factor);
                cusp_factor_hi = std::max(cusp_factor_hi, c.factor);
            }
        }
        for (const auto& c : wedge_identity_residuals(inv, grid, FormulaSet::Verified))
            holds_verified[c.name] += c.holds;
    }
    // Identities hold on every set, except a violation that is a single systematic factor.
    bool ok = true;
    std::string detail = "printed formulas over " + fmt("%.0f", sets) + " sets: ";
    for (const auto& [name, n] : holds) {
        const bool systematic = name == cusp_name && cusp_factor_dev <= 1e-8;
        ok = ok && (n == sets || systematic);
        detail += "[" + name + "] " + fmt("%.0f", n) + "/" + fmt("%.0f", sets) + " max rel " + fmt("%.1e", worst[name]);
        if (n < sets && systematic)
            detail += ", systematic discrepancy: factor lhs/rhs = |r3| (range " + fmt("%.3f", cusp_factor_lo) + ".." +
                      fmt("%.3f", cusp_factor_hi) + ", |factor/|r3| - 1| <= " + fmt("%.1e", cusp_factor_dev) + ")";
        detail += "; ";
    }
    detail += "verified formulas hold:";
    for (const auto& [name, n] : holds_verified) detail += " " + fmt("%.0f", n);
    const double dt = seconds_since(t0);
    return {ok && dt < 5, detail + "; " + fmt("%.2f", dt) + " s (< 5 s)"};
}

// ── Criterion 6 ─────────────────────────────────────────────────────────────

const BadSetValue& bad(const std::vector<BadSetValue>& v, const std::string& name) {
    for (const auto& b : v)
        if (b.name == name) return b;
    throw Error("missing bad set " + name);
}

Outcome criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    std::uniform_real_distribution<double> u(-1, 1);
    int n_random = 0, fail_two = 0, fail_distinct = 0, fail_b5 = 0;
    std::mt19937_64 rng(606);
    for (int t = 0; t < 1000; ++t) {
        const double mr = u(rng), mi = u(rng), nr = 2 * u(rng), ni = 2 * u(rng);
        const cplx mu(mr, mi), nu(nr, ni);
        if (std::abs(mu) < 1e-3) continue;
        ++n_random;
        const RootReport r = circle_roots({std::conj(mu), std::conj(nu), 0, nu, mu});
        fail_two += r.circle_root_count() < 2;
        fail_distinct += count_double_on_circle(r) > 1;
        fail_b5 += bad(bad_set_values(with_mu_nu(mu, nu, 1)), "B5").vanishes != (count_double_on_circle(r) > 0);
    }

    // Double circle roots by construction; see the README for the conditioning filter.
    int n_double = 0, fail_all4 = 0, fail_b5_double = 0, fail_distinct_double = 0;
    for (int t = 0; n_double < 1000 && t < 4000; ++t) {
        const double phi0 = pi * u(rng);
        const double C = u(rng);
        const double D = u(rng);
        const auto [mu, nu] = double_root_mu_nu(phi0, C, D);
        if (std::abs(mu) < 0.05) continue;
        if (bad(bad_set_values(with_mu_nu(mu, nu, 1)), "B2").relative < 1e-3) continue;
        const cplx z0 = std::polar(1.0, 2 * phi0);
        const double split = 2 * std::sqrt(2 * 2.2e-16 * 2 * (std::abs(mu) + std::abs(nu)) /
                                           std::abs(12.0 * mu * z0 * z0 + 6.0 * nu * z0));
        if (split > 0.6 * kClusterTol) continue;
        ++n_double;
        const RootReport r = circle_roots({std::conj(mu), std::conj(nu), 0, nu, mu});
        fail_all4 += r.circle_root_count() != 4 || count_double_on_circle(r) != 1;
        fail_distinct_double += count_double_on_circle(r) > 1;
        fail_b5_double += !bad(bad_set_values(with_mu_nu(mu, nu, 1)), "B5").vanishes;
    }

    // Resultant against a brute-force scan; every other instance forces a common root.
    int n_res = 0, fail_res = 0;
    for (int t = 0; t < 1000; ++t) {
        const double mr = u(rng), mi = u(rng), nr = 2 * u(rng), ni = 2 * u(rng);
        const cplx mu(mr, mi), nu(nr, ni);
        const std::vector<cplx> p{std::conj(mu), std::conj(nu), 0, nu, mu};
        const double mod = 0.3 + std::abs(u(rng));
        cplx r3 = std::polar(mod, pi * u(rng));
        if (t % 2 == 0)
            for (const auto& x : circle_roots(p).roots)
                if (x.on_unit_circle) {
                    r3 = r3_through(std::arg(x.z), mod);
                    break;
                }
        const Invariants inv = with_mu_nu(mu, nu, r3);
        const bool b6 = bad(bad_set_values(inv), "B6").vanishes;
        fail_res += b6 != joint_zero_on_grid(p, build_trig_polys(inv).t_poly(), 20000);
        ++n_res;
    }
    const double dt = seconds_since(t0);
    const bool ok = n_random >= 1000 - 5 && n_double >= 1000 && n_res >= 1000 && fail_two + fail_distinct + fail_b5 +
                                                                                    fail_all4 + fail_b5_double +
                                                                                    fail_distinct_double + fail_res ==
                                                                                    0;
    auto of = [](int f, int n) { return fmt("%.0f", f) + "/" + fmt("%.0f", n); };
    return {ok && dt < 10, "violations: >=2 circle roots " + of(fail_two, n_random) + ", two double roots " +
                               of(fail_distinct + fail_distinct_double, n_random + n_double) +
                               ", double => 4 circle roots " + of(fail_all4, n_double) + ", B5 <=> double " +
                               of(fail_b5 + fail_b5_double, n_random + n_double) + ", B6 <=> brute force " +
                               of(fail_res, n_res) + "; " + fmt("%.2f", dt) + " s (< 10 s)"};
}

// ── Criterion 7 ─────────────────────────────────────────────────────────────

std::vector<std::pair<int, Invariants>> generic_germs(int wanted) {
    std::mt19937_64 rng(7);
    std::vector<std::pair<int, Invariants>> out;
    for (int t = 0; t < 200 && static_cast<int>(out.size()) < wanted; ++t) {
        const Invariants inv = random_on_c(rng);
        if (well_separated_generic(inv)) out.emplace_back(t, inv);
    }
    return out;
}

Artifacts artifacts_symbols() {
    Artifacts a;
    std::string table = "trial,epsilon,n_phi,symbol,matches,cusps,crossings\n";
    bool first = true;
    for (const auto& [trial, inv] : generic_germs(6)) {
        for (int eps : {1, -1}) {
            const FSeries fs = build_fseries(inv, eps, FormulaSet::Verified);
            for (int n : {720, 1440}) {
                const SymbolReport r = classify_asymptotic(fs, kSmallH, n);
                table += fmt("%.0f", trial) + "," + fmt("%+.0f", eps) + "," + fmt("%.0f", n) + "," +
                         r.symbol.to_string() + "," + r.matches + "," +
                         fmt("%.0f", static_cast<double>(r.cusps.params.size())) + "," +
                         fmt("%.0f", static_cast<double>(transversal_count(r.crossings))) + "\n";
            }
            if (first) a[std::string("c7_shape_") + (eps > 0 ? "p" : "m") + ".csv"] =
                section_csv(normalized_section(fs, kSmallH, 720));
        }
        first = false;
    }
    a["c7_symbols.csv"] = table;
    return a;
}

Outcome criterion7() {
    const auto germs = generic_germs(6);
    int admissible = 0, numeric_checked = 0, numeric_ok = 0, printed_admissible = 0;
    std::string printed_failures;
    bool ok = germs.size() >= 5;
    std::string detail;
    bool doubled_numeric = false;
    for (const auto& [trial, inv] : germs) {
        const FullLocusReport full = check_full_locus_asymptotic(inv, kSmallH, 720, FormulaSet::Verified);
        const FullLocusReport fine = check_full_locus_asymptotic(inv, kSmallH, 1440, FormulaSet::Verified);
        const bool six = full.plus.cusps.params.size() == 6 && full.minus.cusps.params.size() == 6;
        const bool stable = fine.plus.symbol == full.plus.symbol && fine.minus.symbol == full.minus.symbol;
        const bool good = six && full.equal && stable && in_s123(full.plus.matches);
        admissible += good;
        ok = ok && good;
        detail += "#" + fmt("%.0f", trial) + " " + full.plus.matches;

        // Reported only: the d7/2 part of the printed f7 makes the two sheets differ.
        try {
            const FullLocusReport printed = check_full_locus_asymptotic(inv, kSmallH, 720, FormulaSet::Printed);
            printed_admissible += printed.equal && in_s123(printed.plus.matches);
        } catch (const Error& e) {
            printed_failures += std::string(" #") + fmt("%.0f", trial) + ": " + e.what() + ";";
        }

        // Numerical sections are compared where the expansion is already in its small-c
        // regime at the numerically accessible level.
        const SymbolReport at_numeric = classify_asymptotic(build_fseries(inv, 1, FormulaSet::Verified), kNumericH, 720);
        if (!(at_numeric.symbol == full.plus.symbol)) {
            detail += " (numeric level not resolvable: " + at_numeric.matches + " at h=0.02); ";
            continue;
        }
        ++numeric_checked;
        const MetricModel m = metric_of(inv);
        const FullLocusReport num = check_full_locus(m, pi * kNumericH * kNumericH, 720);
        bool nok = num.equal && num.plus.symbol == full.plus.symbol && num.plus.cusps.params.size() == 6 &&
                   num.minus.cusps.params.size() == 6;
        if (!doubled_numeric) {
            const SymbolReport n2 = classify_curve(conjugate_section(m, pi * kNumericH * kNumericH, 1440),
                                                   [] {
                                                       ClassifyOptions o;
                                                       o.level_h = kNumericH;
                                                       return o;
                                                   }());
            nok = nok && n2.symbol == num.plus.symbol;
            doubled_numeric = true;
        }
        numeric_ok += nok;
        ok = ok && nok;
        detail += std::string(" numeric ") + (nok ? "agrees" : "DIFFERS: " + num.message) + "; ";
    }
    ok = ok && numeric_checked >= 1;
    return {ok, fmt("%.0f", admissible) + "/" + fmt("%.0f", static_cast<double>(germs.size())) +
                    " germs: 6 cusps, symbol(+c) = symbol(-c) in {S1,S2,S3} at c=1e-8, stable at 1440; numeric h=0.02 " +
                    fmt("%.0f", numeric_ok) + "/" + fmt("%.0f", numeric_checked) + " agree; printed set admissible on " +
                    fmt("%.0f", printed_admissible) + "/" + fmt("%.0f", static_cast<double>(germs.size())) +
                    printed_failures + ". " + detail};
}

// ── Criterion 8 ─────────────────────────────────────────────────────────────

Outcome criterion8() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(-1, 1);
    int good = 0;
    const int metrics = 5;
    std::string detail;
    for (int t = 0; t < metrics; ++t) {
        const Invariants base = random_on_c(rng);
        const double ar2 = 0.3 + 0.3 * std::abs(u(rng)), th2 = 3 * u(rng);
        const Invariants inv = Invariants::from_parameters(base.b0, base.abs_r1(), base.theta1(), ar2, th2,
                                                           base.abs_r3(), base.theta3(), base.tau0, base.v1(),
                                                           base.v2(), base.beta4);
        bool ok = true;
        for (FormulaSet set : {FormulaSet::Printed, FormulaSet::Verified}) {
            const FullLocusReport a = check_full_locus_asymptotic(inv, kSmallH, 720, set);
            for (const SymbolReport* r : {&a.plus, &a.minus})
                ok = ok && r->cusps.params.size() == 4 && transversal_count(r->crossings) == 0;
        }
        const FullLocusReport num = check_full_locus(metric_of(inv), pi * kNumericH * kNumericH, 360);
        for (const SymbolReport* r : {&num.plus, &num.minus})
            ok = ok && r->cusps.params.size() == 4 && transversal_count(r->crossings) == 0;
        good += ok;
        detail += "|r2|=" + fmt("%.2f", ar2) + (ok ? " ok; " : " FAIL; ");
    }
    return {good == metrics, fmt("%.0f", good) + "/" + fmt("%.0f", metrics) +
                                 " off-C metrics with 4 cusps and 0 transversal crossings (expansion c=1e-8 both "
                                 "formula sets, numeric h=0.02, both sheets): " + detail};
}

// ── Criterion 9 ─────────────────────────────────────────────────────────────

// Newton iteration for a self-intersection S(a) = S(b) of the normalized section.
bool solve_crossing(const FSeries& fs, double h, double& a, double& b) {
    for (int it = 0; it < 80; ++it) {
        Vec2 pa, ta, pb, tb;
        normalized_expansion(fs, a, h, pa, ta);
        normalized_expansion(fs, b, h, pb, tb);
        const double f0 = pa[0] - pb[0], f1 = pa[1] - pb[1];
        const double scale = std::max(std::hypot(pa[0], pa[1]), 1.0);
        if (std::hypot(f0, f1) <= 1e-13 * scale && it > 0) return true;
        const double det = -ta[0] * tb[1] + tb[0] * ta[1];
        if (det == 0) return false;
        a -= (-f0 * tb[1] + tb[0] * f1) / det;
        b -= (ta[0] * f1 - ta[1] * f0) / det;
    }
    return false;
}

Outcome criterion9() {
    const auto germs = generic_germs(1);
    if (germs.empty()) return {false, "no GenericOnC germ found"};
    const Invariants inv = germs.front().second;
    const FSeries fs = build_fseries(inv, 1, FormulaSet::Verified);
    const IsoselfPrediction pred = isoself_predict(inv, 1, FormulaSet::Verified);
    bool ok = true;
    int cusps = 0, roots = 0;
    std::string detail;
    for (const auto& br : pred.branches) {
        if (br.kind == BranchKind::Cusp) {
            ++cusps;
            // delta over a decade, h from the predicted magnitude of the cubic law.
            double sx = 0, sy = 0, sxx = 0, sxy = 0, k_small = 0;
            int n = 0;
            bool solved = true;
            for (int k = 0; k <= 6; ++k) {
                const double d = 0.01 * std::pow(10.0, k / 6.0);
                const double h = std::abs(br.coefficient) * d * d * d;
                double a = br.phi0 - d / 2, b = br.phi0 + pi + d / 2;
                solved = solved && solve_crossing(fs, h, a, b);
                const double delta = std::remainder(b - a - pi, 2 * pi);
                solved = solved && std::abs(delta) > d / 2 && std::abs(std::remainder(a - br.phi0, 2 * pi)) < d;
                if (k == 0) k_small = h / (delta * delta * delta);
                const double x = std::log(std::abs(delta)), y = std::log(h);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++n;
            }
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const bool good = solved && std::abs(slope - 3) <= 0.2;
            ok = ok && good;
            detail += "cusp " + fmt("%.4f", br.phi0) + ": slope " + fmt("%.4f", slope) + " (3 +- 0.2), h/delta^3 " +
                      fmt("%.4f", k_small) + " vs formula " + fmt("%.4f", br.coefficient) + "; ";
        } else if (br.kind == BranchKind::SimpleRoot) {
            ++roots;
            const double h = 1e-4, lambda = br.coefficient;
            double a = br.phi0 - lambda * h, b = a + pi + 2 * lambda * h;
            const bool solved = solve_crossing(fs, h, a, b);
            const double measured = std::remainder(b - a - pi, 2 * pi) / (2 * h);
            const double shift = -std::remainder(a - br.phi0, 2 * pi) / h;
            const double rel = std::abs(measured / lambda - 1);
            const bool good = solved && rel <= 0.10 && std::abs(shift / lambda - 1) <= 0.10;
            ok = ok && good;
            detail += "root " + fmt("%.4f", br.phi0) + ": lambda " + fmt("%.5f", measured) + " vs " +
                      fmt("%.5f", lambda) + " (rel " + fmt("%.1e", rel) + "); ";
        }
    }
    // Every predicted branch is a crossing the classifier reports at a small level.
    const SymbolReport r = classify_asymptotic(fs, 1e-4, 1440);
    ok = ok && cusps == 3 && roots >= 1 && transversal_count(r.crossings) == cusps + roots;
    return {ok, "germ #" + fmt("%.0f", germs.front().first) + ", " + fmt("%.0f", cusps) + " cusp and " +
                    fmt("%.0f", roots) + " root branches, classifier finds " +
                    fmt("%.0f", static_cast<double>(transversal_count(r.crossings))) + " crossings at h=1e-4. " +
                    detail};
}

// ── Criterion 10 ────────────────────────────────────────────────────────────

Artifacts golden_artifacts() {
    Artifacts all;
    for (auto gen : {artifacts_heisenberg, artifacts_f4, artifacts_symbols})
        for (auto& [name, text] : gen()) all[name] = std::move(text);
    return all;
}

std::string read_file(const fsys::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10(const std::string& golden_dir, bool write) {
    const Artifacts first = golden_artifacts(), second = golden_artifacts();
    const bool repeat = first == second;
    if (write) {
        fsys::create_directories(golden_dir);
        for (const auto& [name, text] : first) std::ofstream(fsys::path(golden_dir) / name, std::ios::binary) << text;
    }
    int matched = 0;
    std::string mismatched;
    for (const auto& [name, text] : first) {
        const fsys::path p = fsys::path(golden_dir) / name;
        if (fsys::exists(p) && read_file(p) == text) ++matched;
        else mismatched += " " + name;
    }
    const int total = static_cast<int>(first.size());
    return {repeat && matched == total,
            std::string("repeated runs ") + (repeat ? "byte-identical" : "DIFFER") + ", golden files " +
                fmt("%.0f", matched) + "/" + fmt("%.0f", total) + " identical in " + golden_dir +
                (mismatched.empty() ? "" : " (mismatch:" + mismatched + ")")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"didolocus acceptance criteria"};
    std::string golden = DIDOLOCUS_GOLDEN_DIR;
    bool write = false;
    std::vector<int> only;
    app.add_option("--golden", golden, "directory with the golden CSV files");
    app.add_flag("--write-golden", write, "regenerate the golden files before comparing");
    app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Heisenberg exactness", criterion1},
        {"conjugate-time coefficient -6 pi eps b0", criterion2},
        {"f4 reproduction", criterion3},
        {"f5 reproduction", criterion4},
        {"formula-audit identities", criterion5},
        {"stratification properties", criterion6},
        {"symbol admissibility on C", criterion7},
        {"off-C regime", criterion8},
        {"self-intersection branch laws", criterion9},
        {"determinism and golden files", [&] { return criterion10(golden, write); }},
    };
    const std::set<int> selected(only.begin(), only.end());
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
