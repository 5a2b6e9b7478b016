#include "didolocus/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "didolocus/error.hpp"

namespace didolocus {

std::vector<AuditRow> formula_audit(const Invariants& inv, int grid) {
    if (grid < 1) throw Error("audit grid must be positive");
    std::vector<double> phis(grid);
    for (int k = 0; k < grid; ++k) phis[k] = 2 * std::numbers::pi * k / grid;
    std::vector<AuditRow> rows;
    for (FormulaSet set : {FormulaSet::Printed, FormulaSet::Verified}) {
        for (const auto& c : wedge_identity_residuals(inv, phis, set)) {
            AuditRow r;
            r.identity = std::string(to_string(set)) + ": " + c.name;
            r.max_residual = c.max_residual;
            r.grid_size = c.grid_size;
            if (c.holds) {
                r.verdict = "holds";
            } else {
                char buf[64];
                std::snprintf(buf, sizeof buf, "discrepancy (factor %.9g)", c.factor);
                r.verdict = buf;
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

std::string audit_table(const std::vector<AuditRow>& rows) {
    std::string out = "identity, max_residual, grid_size, verdict\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6e", r.max_residual);
        out += r.identity + ", " + buf + ", " + std::to_string(r.grid_size) + ", " + r.verdict + "\n";
    }
    return out;
}

namespace {

double point_segment(double px, double py, const CurveSample& a, const CurveSample& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - a.x - t * dx, py - a.y - t * dy);
}

double directed(const PlanarCurve& from, const PlanarCurve& to) {
    const auto& s = to.samples;
    const std::size_t n = s.size();
    double worst = 0;
    for (const auto& p : from.samples) {
        double best = std::numeric_limits<double>::infinity();
        if (n == 1) best = std::hypot(p.x - s[0].x, p.y - s[0].y);
        for (std::size_t i = 0; i + 1 < n + (to.closed ? 1 : 0); ++i)
            best = std::min(best, point_segment(p.x, p.y, s[i], s[(i + 1) % n]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double curve_distance(const PlanarCurve& a, const PlanarCurve& b) {
    if (a.samples.empty() || b.samples.empty()) throw Error("empty curve");
    return std::max(directed(a, b), directed(b, a));
}

double curve_deviation(const PlanarCurve& from, const PlanarCurve& to) {
    if (from.samples.empty() || to.samples.empty()) throw Error("empty curve");
    return directed(from, to);
}

double pointwise_distance(const PlanarCurve& a, const PlanarCurve& b) {
    double worst = 0;
    std::size_t j = 0;
    for (const auto& p : a.samples) {
        while (j < b.samples.size() && b.samples[j].phi < p.phi - 1e-12) ++j;
        if (j == b.samples.size()) break;
        if (std::abs(b.samples[j].phi - p.phi) <= 1e-12)
            worst = std::max(worst, std::hypot(p.x - b.samples[j].x, p.y - b.samples[j].y));
    }
    return worst;
}

std::vector<ContactRow> contact_residuals(const MetricModel& m, const FSeries& fs, const std::vector<double>& hs,
                                          int n_phi, const ConjugateOptions& opt, int refine) {
    std::vector<ContactRow> rows;
    for (double h : hs) {
        if (!(h > 0)) throw Error("h must be positive");
        ContactRow r;
        r.h = h;
        r.epsilon = fs.epsilon;
        r.level = fs.epsilon * std::numbers::pi * h * h;
        const PlanarCurve num = conjugate_section(m, r.level, n_phi, opt);
        const PlanarCurve asym = asymptotic_section(fs, h, n_phi * refine);
        r.pointwise = pointwise_distance(num, asym);
        r.deviation = curve_deviation(num, asym);
        r.scaled = r.deviation / std::pow(h, fs.order() + 1);
        rows.push_back(r);
    }
    return rows;
}

std::string contact_table(const std::vector<ContactRow>& rows) {
    std::string out = "h,level,epsilon,pointwise,deviation,scaled\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", r.h, r.level, r.epsilon, r.pointwise,
                      r.deviation, r.scaled);
        out += buf;
    }
    return out;
}

}  // namespace didolocus
