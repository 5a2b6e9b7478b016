#include "didolocus/locus_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "didolocus/error.hpp"
#include "json.hpp"

namespace didolocus {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

using P2 = std::array<double, 2>;

P2 sub(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }
double cross(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }
double dot(const P2& a, const P2& b) { return a[0] * b[0] + a[1] * b[1]; }
double norm(const P2& a) { return std::hypot(a[0], a[1]); }

double wrap(double phi) {
    double r = std::fmod(phi, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
}

// Cyclic distance between two parameters on the circle.
double param_gap(double a, double b) {
    const double d = std::abs(wrap(a) - wrap(b));
    return std::min(d, kTwoPi - d);
}

// Evaluates the curve between samples. With no analytic evaluator a uniform
// Catmull-Rom spline through the samples gives a C1 interpolant, which is what the
// Newton refinement of crossings needs.
class CurveView {
public:
    CurveView(const PlanarCurve& c, const CurveEvaluator& ev) : c_(c), ev_(ev) {
        n_ = c.samples.size();
        phi0_ = n_ ? c.samples[0].phi : 0.0;
        step_ = n_ ? kTwoPi / static_cast<double>(n_) : 0.0;
    }

    std::size_t size() const { return n_; }
    double step() const { return step_; }
    P2 point(std::size_t i) const {
        const auto& s = c_.samples[i % n_];
        return {s.x, s.y};
    }
    double param(std::size_t i) const { return phi0_ + step_ * static_cast<double>(i); }

    void eval(double phi, P2& pos, P2& tan) const {
        if (ev_) {
            ev_(phi, pos, tan);
            return;
        }
        const double u = wrap(phi - phi0_) / step_;
        const auto k = static_cast<std::size_t>(std::floor(u));
        const double t = u - static_cast<double>(k);
        const P2 p0 = point(k + n_ - 1), p1 = point(k), p2 = point(k + 1), p3 = point(k + 2);
        for (int d = 0; d < 2; ++d) {
            const double a = -0.5 * p0[d] + 1.5 * p1[d] - 1.5 * p2[d] + 0.5 * p3[d];
            const double b = p0[d] - 2.5 * p1[d] + 2 * p2[d] - 0.5 * p3[d];
            const double c = -0.5 * p0[d] + 0.5 * p2[d];
            pos[d] = ((a * t + b) * t + c) * t + p1[d];
            tan[d] = ((3 * a * t + 2 * b) * t + c) / step_;
        }
    }

private:
    const PlanarCurve& c_;
    const CurveEvaluator& ev_;
    std::size_t n_ = 0;
    double phi0_ = 0, step_ = 0;
};

double effective_tangency_tol(const ClassifyOptions& opt) {
    if (!opt.level_h) return opt.tangency_tol;
    return opt.tangency_tol * std::min(1.0, std::abs(*opt.level_h) / kTangencyRefH);
}

// Golden-section minimisation of a unimodal function on [a, b].
template <class F>
double golden_min(F f, double a, double b, int iters = 80) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && (b - a) > 1e-15 * (1 + std::abs(a)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

// ─── Cusps ───────────────────────────────────────────────────────────────────

namespace {

CuspSet detect_cusps_impl(const CurveView& cv, double cusp_frac) {
    const std::size_t n = cv.size();
    if (n < 8) throw Error("curve needs at least 8 samples");
    const double dphi = cv.step();

    std::vector<P2> vel(n);
    std::vector<double> speed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const P2 d = sub(cv.point(i + 1), cv.point(i));
        vel[i] = {d[0] / dphi, d[1] / dphi};
        speed[i] = norm(vel[i]);
    }
    std::vector<double> sorted = speed;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
    const double median = sorted[n / 2];
    if (!(median > 0)) throw Error("smooth curve, no cusps");

    struct Cand {
        std::size_t i;
        double v;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = speed[(i + n - 1) % n], next = speed[(i + 1) % n];
        if (speed[i] <= prev && speed[i] < next && speed[i] < cusp_frac * median) cands.push_back({i, speed[i]});
    }
    // A plateau of tiny speeds can yield neighbouring minima; keep the deepest.
    std::vector<Cand> kept;
    for (const auto& c : cands) {
        if (!kept.empty() && c.i - kept.back().i <= 2) {
            if (c.v < kept.back().v) kept.back() = c;
            continue;
        }
        kept.push_back(c);
    }
    if (kept.size() > 1 && kept.front().i + n - kept.back().i <= 2) {
        if (kept.back().v < kept.front().v) kept.front() = kept.back();
        kept.pop_back();
    }
    if (kept.empty()) throw Error("smooth curve, no cusps");

    CuspSet out;
    for (const auto& c : kept) {
        const std::size_t i = c.i;
        const P2 vm = vel[(i + n - 1) % n], v0 = vel[i], vp = vel[(i + 1) % n];
        // Quadratic interpolation of the velocity vector, whose norm is minimal at the cusp.
        auto vq = [&](double t) {
            P2 v;
            for (int d = 0; d < 2; ++d) v[d] = v0[d] + t * (vp[d] - vm[d]) / 2 + t * t * (vp[d] - 2 * v0[d] + vm[d]) / 2;
            return dot(v, v);
        };
        double best_t = 0, best = vq(0);
        for (int k = -20; k <= 20; ++k) {
            const double t = k / 20.0;
            if (vq(t) < best) best = vq(t), best_t = t;
        }
        best_t = golden_min(vq, std::max(-1.0, best_t - 0.05), std::min(1.0, best_t + 0.05));
        double phi = cv.param(i) + dphi / 2 + best_t * dphi;
        phi = golden_min(
            [&](double p) {
                P2 pos, tan;
                cv.eval(p, pos, tan);
                return norm(tan);
            },
            phi - dphi, phi + dphi);
        out.params.push_back(wrap(phi));
        out.speed_min.push_back(c.v / median);
        const P2 a = vel[(i + n - 2) % n], b = vel[(i + 2) % n];
        out.turning.push_back(std::atan2(std::abs(cross(a, b)), dot(a, b)));
    }
    std::vector<std::size_t> order(out.params.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return out.params[a] < out.params[b]; });
    CuspSet sorted_out;
    for (auto k : order) {
        sorted_out.params.push_back(out.params[k]);
        sorted_out.speed_min.push_back(out.speed_min[k]);
        sorted_out.turning.push_back(out.turning[k]);
    }
    return sorted_out;
}

}  // namespace

CuspSet detect_cusps(const PlanarCurve& curve, double cusp_frac) {
    const CurveEvaluator none;
    return detect_cusps_impl(CurveView(curve, none), cusp_frac);
}

// ─── Self-intersections ──────────────────────────────────────────────────────

std::vector<Crossing> self_intersections(const PlanarCurve& curve, const ClassifyOptions& opt) {
    const CurveView cv(curve, opt.evaluator);
    const std::size_t n = cv.size();
    if (n < 4) return {};
    const double dphi = cv.step();

    // Vertices of the polyline that is swept. Near a cusp the curve can fold into a loop
    // narrower than the sample spacing, so slow segments are subdivided when the exact
    // curve is available.
    struct Vertex {
        double phi;
        P2 p;
    };
    std::vector<Vertex> verts;
    {
        std::vector<double> speed(n);
        for (std::size_t i = 0; i < n; ++i) speed[i] = norm(sub(cv.point(i + 1), cv.point(i)));
        std::vector<double> sorted = speed;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
        const double slow = opt.cusp_frac * sorted[n / 2];
        std::vector<bool> refine(n, false);
        if (opt.evaluator)
            for (std::size_t i = 0; i < n; ++i)
                if (speed[i] < slow)
                    for (std::size_t k = i + n - 2; k <= i + n + 2; ++k) refine[k % n] = true;
        constexpr int kSub = 32;
        for (std::size_t i = 0; i < n; ++i) {
            verts.push_back({cv.param(i), cv.point(i)});
            if (!refine[i]) continue;
            for (int k = 1; k < kSub; ++k) {
                const double phi = cv.param(i) + dphi * k / kSub;
                P2 pos, tan;
                cv.eval(phi, pos, tan);
                verts.push_back({phi, pos});
            }
        }
    }
    const std::size_t nv = verts.size();
    auto vtx = [&](std::size_t i) -> const Vertex& { return verts[i % nv]; };
    auto seg_dphi = [&](std::size_t i) { return i + 1 < nv ? verts[i + 1].phi - verts[i].phi : verts[0].phi + kTwoPi - verts[i].phi; };

    struct Box {
        double x0, x1, y0, y1;
    };
    std::vector<Box> boxes(nv);
    double extent = 0;
    for (std::size_t i = 0; i < nv; ++i) {
        const P2 a = vtx(i).p, b = vtx(i + 1).p;
        boxes[i] = {std::min(a[0], b[0]), std::max(a[0], b[0]), std::min(a[1], b[1]), std::max(a[1], b[1])};
        extent = std::max({extent, std::abs(a[0]), std::abs(a[1])});
    }
    // Sort segment indices by left edge so the sweep only pairs overlapping x-ranges.
    std::vector<std::size_t> order(nv);
    for (std::size_t i = 0; i < nv; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto l, auto r) { return boxes[l].x0 < boxes[r].x0; });

    std::vector<Crossing> found;
    for (std::size_t oi = 0; oi < nv; ++oi) {
        const std::size_t i0 = order[oi];
        for (std::size_t oj = oi + 1; oj < nv && boxes[order[oj]].x0 <= boxes[i0].x1; ++oj) {
            std::size_t i = i0, j = order[oj];
            if (i > j) std::swap(i, j);
            if (j < i + 2 || (i == 0 && j == nv - 1)) continue;
            const Box &bi = boxes[i], &bj = boxes[j];
            if (bi.y1 < bj.y0 || bj.y1 < bi.y0) continue;
            const P2 p = vtx(i).p, q = vtx(j).p;
            const P2 d1 = sub(vtx(i + 1).p, p), d2 = sub(vtx(j + 1).p, q);
            const double den = cross(d1, d2);
            if (std::abs(den) <= 1e-300 || std::abs(den) <= 1e-14 * norm(d1) * norm(d2)) continue;
            const P2 pq = sub(q, p);
            const double t = cross(pq, d2) / den;
            const double u = cross(pq, d1) / den;
            // A crossing through a vertex can land at t = -1e-17 on one segment and t = 1
            // on the other; the slack keeps it, and the duplicate filter below drops the twin.
            constexpr double kSlack = 1e-9;
            if (t < -kSlack || t > 1 + kSlack || u < -kSlack || u > 1 + kSlack) continue;

            Crossing c;
            c.phi_a = vtx(i).phi + t * seg_dphi(i);
            c.phi_b = vtx(j).phi + u * seg_dphi(j);
            c.x = p[0] + t * d1[0];
            c.y = p[1] + t * d1[1];
            const double reach = 2 * std::max(seg_dphi(i), seg_dphi(j));

            // Newton on C(a) - C(b) = 0 using the interpolant or the analytic curve.
            double a = c.phi_a, b = c.phi_b;
            bool ok = true;
            P2 pa, ta, pb, tb;
            for (int it = 0; it < 40; ++it) {
                cv.eval(a, pa, ta);
                cv.eval(b, pb, tb);
                const P2 g = sub(pa, pb);
                const double det = -cross(ta, tb);
                if (std::abs(det) <= 1e-300) {
                    ok = false;
                    break;
                }
                // Solve [ta, -tb] (da, db) = -g by Cramer's rule.
                const double da = (g[0] * tb[1] - tb[0] * g[1]) / det;
                const double db = (ta[1] * g[0] - ta[0] * g[1]) / det;
                a += da;
                b += db;
                if (std::abs(a - c.phi_a) > reach || std::abs(b - c.phi_b) > reach) {
                    ok = false;
                    break;
                }
                if (std::abs(da) + std::abs(db) < 1e-15 * kTwoPi) break;
            }
            if (ok) {
                cv.eval(a, pa, ta);
                cv.eval(b, pb, tb);
                ok = norm(sub(pa, pb)) <= 1e-9 * std::max(extent, 1e-300);
            }
            if (ok) {
                c.phi_a = a;
                c.phi_b = b;
                c.x = 0.5 * (pa[0] + pb[0]);
                c.y = 0.5 * (pa[1] + pb[1]);
            } else {
                ta = d1;
                tb = d2;
            }
            c.phi_a = wrap(c.phi_a);
            c.phi_b = wrap(c.phi_b);
            c.angle = std::atan2(std::abs(cross(ta, tb)), std::abs(dot(ta, tb)));
            found.push_back(c);
        }
    }

    // Crossings through a vertex can be reported by two segment pairs.
    const double tol_eff = effective_tangency_tol(opt);
    std::vector<Crossing> out;
    for (auto& c : found) {
        if (c.phi_a > c.phi_b) std::swap(c.phi_a, c.phi_b);
        // Compared as unordered pairs: wrapping can swap which parameter is smaller.
        const double tol = 1e-6 * dphi;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Crossing& o) {
            return (param_gap(o.phi_a, c.phi_a) < tol && param_gap(o.phi_b, c.phi_b) < tol) ||
                   (param_gap(o.phi_a, c.phi_b) < tol && param_gap(o.phi_b, c.phi_a) < tol);
        });
        if (dup) continue;
        c.transversal = c.angle >= tol_eff;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& r) {
        return l.phi_a != r.phi_a ? l.phi_a < r.phi_a : l.phi_b < r.phi_b;
    });
    return out;
}

// ─── Symbols ─────────────────────────────────────────────────────────────────

std::string Symbol::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < doubled.size(); ++i) {
        if (i) s += ",";
        const int d = doubled[i];
        s += (d % 2 == 0) ? std::to_string(d / 2) : std::to_string(d) + "/2";
    }
    return s + ")";
}

Symbol canonicalize(const Symbol& s) {
    Symbol best = s;
    const std::size_t n = s.doubled.size();
    const std::vector<int> rev(s.doubled.rbegin(), s.doubled.rend());
    for (const std::vector<int>* seq : {&s.doubled, &rev}) {
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<int> cand(n);
            for (std::size_t k = 0; k < n; ++k) cand[k] = (*seq)[(k + r) % n];
            if (cand < best.doubled) best.doubled = cand;
        }
    }
    best.canonical = true;
    return best;
}

const std::vector<std::pair<std::string, Symbol>>& admissible_symbols() {
    static const std::vector<std::pair<std::string, Symbol>> table = [] {
        const std::vector<std::pair<std::string, std::vector<int>>> raw = {
            {"S1", {4, 2, 2, 4, 2, 0}}, {"S2", {4, 2, 2, 2, 2, 2}}, {"S3", {0, 2, 2, 2, 2, 2}},
            {"S4", {1, 1, 2, 0, 0, 2}}, {"S5", {2, 1, 1, 2, 2, 2}}, {"S6", {3, 1, 2, 2, 0, 2}},
            {"S7", {4, 1, 1, 4, 0, 0}},
        };
        std::vector<std::pair<std::string, Symbol>> t;
        for (const auto& [name, d] : raw) t.emplace_back(name, canonicalize(Symbol{d, false}));
        return t;
    }();
    return table;
}

std::string match_admissible(const Symbol& s) {
    const Symbol c = canonicalize(s);
    for (const auto& [name, sym] : admissible_symbols())
        if (sym == c) return name;
    return "other";
}

SymbolReport classify_curve(const PlanarCurve& curve, const ClassifyOptions& opt) {
    const CurveView cv(curve, opt.evaluator);
    SymbolReport r;
    r.level = curve.level;
    r.epsilon = curve.epsilon;
    r.cusps = detect_cusps_impl(cv, opt.cusp_frac);
    r.crossings = self_intersections(curve, opt);

    const auto& cp = r.cusps.params;
    const std::size_t m = cp.size();
    // Arc k runs from cusp k to cusp k+1 (cyclically).
    auto arc_of = [&](double phi) -> std::size_t {
        const double p = wrap(phi);
        for (std::size_t k = 0; k < m; ++k)
            if (param_gap(p, cp[k]) < 1e-9) throw Error("degenerate arc boundary");
        for (std::size_t k = 0; k + 1 < m; ++k)
            if (p > cp[k] && p < cp[k + 1]) return k;
        return m - 1;
    };
    std::vector<int> counts(m, 0);
    for (const auto& c : r.crossings) {
        if (!c.transversal) continue;
        ++counts[arc_of(c.phi_a)];
        ++counts[arc_of(c.phi_b)];
    }
    r.symbol = canonicalize(Symbol{counts, false});
    r.matches = match_admissible(r.symbol);
    return r;
}

Symbol symbol(const PlanarCurve& curve, const ClassifyOptions& opt) { return classify_curve(curve, opt).symbol; }

std::string symbol_report_json(const SymbolReport& r) {
    nlohmann::ordered_json j;
    j["level"] = r.level;
    j["epsilon"] = r.epsilon;
    j["cusps"] = r.cusps.params;
    auto xs = nlohmann::ordered_json::array();
    for (const auto& c : r.crossings)
        xs.push_back({{"phi_a", c.phi_a},
                      {"phi_b", c.phi_b},
                      {"x", c.x},
                      {"y", c.y},
                      {"angle", c.angle},
                      {"transversal", c.transversal}});
    j["crossings"] = xs;
    std::vector<double> halves;
    for (int d : r.symbol.doubled) halves.push_back(d / 2.0);
    j["symbol"] = halves;
    j["matches"] = r.matches;
    return j.dump(2);
}

// ─── Full locus ──────────────────────────────────────────────────────────────

namespace {

FullLocusReport compare_sheets(SymbolReport plus, SymbolReport minus) {
    FullLocusReport rep;
    rep.plus = std::move(plus);
    rep.minus = std::move(minus);
    rep.equal = rep.plus.symbol == rep.minus.symbol;
    if (!rep.equal)
        throw Error("ε-asymmetry detected: " + rep.plus.symbol.to_string() + " vs " + rep.minus.symbol.to_string());
    rep.message = "symbol " + rep.plus.symbol.to_string() + " (" + rep.plus.matches + ") on both sheets";
    return rep;
}

}  // namespace

FullLocusReport check_full_locus(const MetricModel& m, double c, int n_phi, const ConjugateOptions& copt) {
    const double level = std::abs(c);
    ClassifyOptions opt;
    opt.level_h = std::sqrt(level / std::numbers::pi);
    const PlanarCurve up = conjugate_section(m, level, n_phi, copt);
    const PlanarCurve down = conjugate_section(m, -level, n_phi, copt);
    return compare_sheets(classify_curve(up, opt), classify_curve(down, opt));
}

ClassifyOptions asymptotic_options(const FSeries& fs, double h) {
    ClassifyOptions opt;
    opt.level_h = h;
    opt.evaluator = [fs, h](double phi, std::array<double, 2>& pos, std::array<double, 2>& tan) {
        normalized_expansion(fs, phi, h, pos, tan);
    };
    return opt;
}

SymbolReport classify_asymptotic(const FSeries& fs, double h, int n_phi, const ClassifyOptions& tune) {
    ClassifyOptions opt = asymptotic_options(fs, h);
    opt.cusp_frac = tune.cusp_frac;
    opt.tangency_tol = tune.tangency_tol;
    return classify_curve(normalized_section(fs, h, n_phi), opt);
}

FullLocusReport check_full_locus_asymptotic(const Invariants& inv, double h, int n_phi, FormulaSet set) {
    const FSeries up = build_fseries(inv, 1, set), down = build_fseries(inv, -1, set);
    return compare_sheets(classify_asymptotic(up, h, n_phi), classify_asymptotic(down, h, n_phi));
}

}  // namespace didolocus
