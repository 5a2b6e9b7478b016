#include "didolocus/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "didolocus/audit.hpp"
#include "didolocus/error.hpp"
#include "didolocus/locus_classifier.hpp"
#include "didolocus/stratification.hpp"
#include "json.hpp"

namespace didolocus {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

// ─── CSV ─────────────────────────────────────────────────────────────────────

std::string section_csv(const PlanarCurve& c) {
    std::string out = "# level=" + fmt17(c.level) + " epsilon=" + (c.epsilon > 0 ? "+1" : "-1") + "\nphi,x,y\n";
    for (const auto& s : c.samples) out += fmt17(s.phi) + "," + fmt17(s.x) + "," + fmt17(s.y) + "\n";
    return out;
}

PlanarCurve parse_section_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    PlanarCurve c;
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "# level=%lf epsilon=%d", &c.level, &c.epsilon) != 2)
        throw Error("section CSV: missing level comment");
    if (!std::getline(in, line) || line != "phi,x,y") throw Error("section CSV: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CurveSample s{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.phi, &s.x, &s.y) != 3)
            throw Error("section CSV: malformed row '" + line + "'");
        c.samples.push_back(s);
    }
    return c;
}

std::string front_csv(const std::vector<FrontPoint>& pts) {
    std::string out = "phi,rho,x,y,w\n";
    for (const auto& p : pts)
        out += fmt17(p.phi) + "," + fmt17(p.rho) + "," + fmt17(p.x) + "," + fmt17(p.y) + "," + fmt17(p.w) + "\n";
    return out;
}

std::string conjugate_csv(const std::vector<ConjugatePoint>& pts) {
    std::string out = "phi,rho,s_c,t_c,x,y,w,h,epsilon\n";
    for (const auto& p : pts)
        out += fmt17(p.phi) + "," + fmt17(p.rho) + "," + fmt17(p.s_c) + "," + fmt17(p.t_c) + "," + fmt17(p.x) + "," +
               fmt17(p.y) + "," + fmt17(p.w) + "," + fmt17(p.h) + "," + std::to_string(p.epsilon) + "\n";
    return out;
}

// ─── SVG ─────────────────────────────────────────────────────────────────────

std::string render_svg(const std::vector<SvgPolyline>& lines, const std::vector<SvgMarker>& markers,
                       const std::string& title, int width, int height) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto grow = [&](double x, double y) {
        x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    };
    for (const auto& l : lines)
        for (const auto& p : l.points) grow(p[0], p[1]);
    for (const auto& m : markers) grow(m.x, m.y);
    if (!(x0 <= x1)) x0 = x1 = y0 = y1 = 0;
    const double margin = 40;
    double span = std::max(x1 - x0, y1 - y0);
    if (!(span > 0)) span = 1;
    const double scale = std::min(width - 2 * margin, height - 2 * margin) / span;
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    auto px = [&](double x) { return 0.5 * width + (x - cx) * scale; };
    auto py = [&](double y) { return 0.5 * height - (y - cy) * scale; };

    char buf[256];
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf,
                  "<!-- scale: %.9g px per unit; data box [%.9g, %.9g] x [%.9g, %.9g] -->\n", scale, x0, x1, y0, y1);
    out += buf;
    std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n",
                  margin / 2, py(0), width - margin / 2, py(0));
    if (cy - 0.5 * span <= 0 && 0 <= cy + 0.5 * span) out += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n",
                  px(0), margin / 2, px(0), height - margin / 2);
    if (cx - 0.5 * span <= 0 && 0 <= cx + 0.5 * span) out += buf;

    for (const auto& l : lines) {
        out += std::string("<") + (l.closed ? "polygon" : "polyline") + " fill=\"none\" stroke=\"" + l.stroke +
               "\" stroke-width=\"1\" points=\"";
        for (std::size_t k = 0; k < l.points.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", k ? " " : "", px(l.points[k][0]), py(l.points[k][1]));
            out += buf;
        }
        out += "\"/>\n";
    }
    for (const auto& m : markers) {
        if (m.kind == SvgMarker::Kind::Cusp) {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"#c0392b\"/>\n", px(m.x), py(m.y));
        } else {
            const char* color = m.kind == SvgMarker::Kind::Crossing ? "#27ae60" : "#e67e22";
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.3f\" y=\"%.3f\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"%s\"/>\n",
                          px(m.x) - 3, py(m.y) - 3, color);
        }
        out += buf;
    }
    out += "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"12\">";
    for (char ch : title) {
        if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else if (ch == '&') out += "&amp;";
        else out += ch;
    }
    out += "</text>\n</svg>\n";
    return out;
}

// ─── Configuration ───────────────────────────────────────────────────────────

BetaJet FamilySpec::at(double lambda) const {
    Poly2 p;
    for (const auto& t : terms) p.add(t.i, t.j, t.c0 + t.c1 * lambda);
    return BetaJet::from_poly(p);
}

MetricModel RunConfig::metric() const {
    if (!metric_json) throw Error("config: command needs a 'metric'");
    return MetricModel::from_json_text(*metric_json);
}

namespace {

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error("config: " + where + "." + key + ": " + e.what());
    }
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0) || !std::isfinite(v)) throw Error("config: " + key + " must be positive and finite");
}

void require_count(int v, const std::string& key) {
    if (v < 1) throw Error("config: " + key + " must be a positive integer");
}

void check_epsilons(const std::vector<int>& eps, const std::string& key) {
    for (int e : eps)
        if (e != 1 && e != -1) throw Error("config: " + key + " entries must be +1 or -1");
}

FormulaSet parse_set(const std::string& s) {
    if (s == "printed") return FormulaSet::Printed;
    if (s == "verified") return FormulaSet::Verified;
    throw Error("config: formula_set must be 'printed' or 'verified'");
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw Error("malformed config: top level must be an object");
    RunConfig cfg;
    const json empty = json::object();
    auto section = [&](const char* key) -> const json& {
        if (!j.contains(key)) return empty;
        if (!j.at(key).is_object()) throw Error(std::string("config: '") + key + "' must be an object");
        return j.at(key);
    };

    if (j.contains("metric")) {
        const json& m = j.at("metric");
        if (m.is_string()) {
            fs::path p = m.get<std::string>();
            if (p.is_relative()) p = fs::path(base_dir) / p;
            cfg.metric_json = MetricModel::from_json_file(p.string()).to_json_text();
        } else {
            cfg.metric_json = MetricModel::from_json_text(m.dump()).to_json_text();
        }
    }
    if (j.contains("family")) {
        FamilySpec f;
        const json& fam = j.at("family");
        if (!fam.is_object() || !fam.contains("terms") || !fam.at("terms").is_array())
            throw Error("config: family.terms must be an array");
        for (const auto& t : fam.at("terms")) {
            if (!t.contains("i") || !t.contains("j")) throw Error("config: family term needs i and j");
            f.terms.push_back({t.at("i").get<int>(), t.at("j").get<int>(), get_or(t, "c0", 0.0, "family.terms"),
                               get_or(t, "c1", 0.0, "family.terms")});
        }
        f.at(0.0);  // validates degrees
        cfg.family = std::move(f);
    }
    cfg.formula_set = parse_set(get_or<std::string>(j, "formula_set", "printed", "config"));

    const json& integ = section("integrator");
    cfg.conj.tol = get_or(integ, "tol", cfg.conj.tol, "integrator");
    cfg.conj.t_min = get_or(integ, "t_min", cfg.conj.t_min, "integrator");
    cfg.conj.t_max = get_or(integ, "t_max", cfg.conj.t_max, "integrator");
    cfg.conj.max_step = get_or(integ, "max_step", cfg.conj.max_step, "integrator");
    require_positive(cfg.conj.tol, "integrator.tol");
    require_positive(cfg.conj.max_step, "integrator.max_step");
    if (!(cfg.conj.t_max > cfg.conj.t_min) || !(cfg.conj.t_min > 0))
        throw Error("config: integrator needs 0 < t_min < t_max");

    const json& g = section("geodesic");
    cfg.geodesic.phi = get_or(g, "phi", cfg.geodesic.phi, "geodesic");
    cfg.geodesic.rho = get_or(g, "rho", cfg.geodesic.rho, "geodesic");
    cfg.geodesic.s_max = get_or(g, "s_max", cfg.geodesic.s_max, "geodesic");
    cfg.geodesic.tol = get_or(g, "tol", cfg.geodesic.tol, "geodesic");
    require_positive(cfg.geodesic.tol, "geodesic.tol");
    require_positive(cfg.geodesic.s_max, "geodesic.s_max");

    const json& fr = section("front");
    cfg.front.s = get_or(fr, "s", cfg.front.s, "front");
    cfg.front.rho_min = get_or(fr, "rho_min", cfg.front.rho_min, "front");
    cfg.front.rho_max = get_or(fr, "rho_max", cfg.front.rho_max, "front");
    cfg.front.tol = get_or(fr, "tol", cfg.front.tol, "front");
    cfg.front.n_phi = get_or(fr, "n_phi", cfg.front.n_phi, "front");
    cfg.front.n_r = get_or(fr, "n_r", cfg.front.n_r, "front");
    require_positive(cfg.front.tol, "front.tol");
    require_count(cfg.front.n_phi, "front.n_phi");
    require_count(cfg.front.n_r, "front.n_r");

    const json& cj = section("conjugate");
    cfg.conjugate.phis = get_or(cj, "phis", cfg.conjugate.phis, "conjugate");
    if (cfg.conjugate.phis.empty()) {
        const int n = get_or(cj, "n_phi", 8, "conjugate");
        require_count(n, "conjugate.n_phi");
        for (int k = 0; k < n; ++k) cfg.conjugate.phis.push_back(2 * std::numbers::pi * k / n);
    }
    cfg.conjugate.rhos = get_or(cj, "rhos", cfg.conjugate.rhos, "conjugate");
    for (double r : cfg.conjugate.rhos)
        if (!(r != 0) || !std::isfinite(r)) throw Error("config: conjugate.rhos must be finite and nonzero");

    const json& se = section("section");
    cfg.section.levels = get_or(se, "levels", cfg.section.levels, "section");
    cfg.section.n_phi = get_or(se, "n_phi", cfg.section.n_phi, "section");
    require_count(cfg.section.n_phi, "section.n_phi");
    for (double c : cfg.section.levels)
        if (!(c != 0) || !std::isfinite(c)) throw Error("config: section.levels must be finite and nonzero");

    const json& as = section("asymptotic");
    cfg.asymptotic.hs = get_or(as, "h", cfg.asymptotic.hs, "asymptotic");
    cfg.asymptotic.epsilons = get_or(as, "epsilons", cfg.asymptotic.epsilons, "asymptotic");
    cfg.asymptotic.n_phi = get_or(as, "n_phi", cfg.asymptotic.n_phi, "asymptotic");
    cfg.asymptotic.audit_grid = get_or(as, "audit_grid", cfg.asymptotic.audit_grid, "asymptotic");
    for (double h : cfg.asymptotic.hs) require_positive(h, "asymptotic.h");
    check_epsilons(cfg.asymptotic.epsilons, "asymptotic.epsilons");
    require_count(cfg.asymptotic.n_phi, "asymptotic.n_phi");
    require_count(cfg.asymptotic.audit_grid, "asymptotic.audit_grid");

    const json& cl = section("classify");
    cfg.classify.source = get_or(cl, "source", cfg.classify.source, "classify");
    if (cfg.classify.source != "asymptotic" && cfg.classify.source != "numeric")
        throw Error("config: classify.source must be 'asymptotic' or 'numeric'");
    cfg.classify.hs = get_or(cl, "h", cfg.classify.hs, "classify");
    cfg.classify.levels = get_or(cl, "levels", cfg.classify.levels, "classify");
    cfg.classify.n_phi = get_or(cl, "n_phi", cfg.classify.n_phi, "classify");
    cfg.classify.cusp_frac = get_or(cl, "cusp_frac", cfg.classify.cusp_frac, "classify");
    cfg.classify.tangency_tol = get_or(cl, "tangency_tol", cfg.classify.tangency_tol, "classify");
    for (double h : cfg.classify.hs) require_positive(h, "classify.h");
    for (double c : cfg.classify.levels)
        if (!(c != 0) || !std::isfinite(c)) throw Error("config: classify.levels must be finite and nonzero");
    require_count(cfg.classify.n_phi, "classify.n_phi");
    require_positive(cfg.classify.cusp_frac, "classify.cusp_frac");
    require_positive(cfg.classify.tangency_tol, "classify.tangency_tol");

    const json& sw = section("sweep");
    if (sw.contains("lambda")) {
        const auto range = get_or(sw, "lambda", std::vector<double>{}, "sweep");
        if (range.size() != 2) throw Error("config: sweep.lambda must be [lambda0, lambda1]");
        cfg.sweep.lambda0 = range[0];
        cfg.sweep.lambda1 = range[1];
    }
    cfg.sweep.steps = get_or(sw, "steps", cfg.sweep.steps, "sweep");
    if (!std::isfinite(cfg.sweep.lambda0) || !std::isfinite(cfg.sweep.lambda1) ||
        !(cfg.sweep.lambda1 > cfg.sweep.lambda0))
        throw Error("config: sweep range must be finite with lambda0 < lambda1");
    if (cfg.sweep.steps < 2) throw Error("config: sweep.steps must be at least 2");

    const json& co = section("compare");
    cfg.compare.hs = get_or(co, "h", cfg.compare.hs, "compare");
    cfg.compare.epsilons = get_or(co, "epsilons", cfg.compare.epsilons, "compare");
    cfg.compare.n_phi = get_or(co, "n_phi", cfg.compare.n_phi, "compare");
    for (double h : cfg.compare.hs) require_positive(h, "compare.h");
    check_epsilons(cfg.compare.epsilons, "compare.epsilons");
    require_count(cfg.compare.n_phi, "compare.n_phi");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), fs::path(path).parent_path().string().empty()
                                          ? std::string(".")
                                          : fs::path(path).parent_path().string());
}

// ─── Commands ────────────────────────────────────────────────────────────────

namespace {

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << content;
}

SvgPolyline curve_polyline(const PlanarCurve& c) {
    SvgPolyline l;
    l.closed = c.closed;
    for (const auto& s : c.samples) l.points.push_back({s.x, s.y});
    return l;
}

// Markers come from the classifier; a curve without cusps is drawn bare.
std::vector<SvgMarker> curve_markers(const PlanarCurve& c, const ClassifyOptions& opt) {
    std::vector<SvgMarker> out;
    try {
        const SymbolReport r = classify_curve(c, opt);
        for (double phi : r.cusps.params) {
            std::array<double, 2> pos{}, tan{};
            if (opt.evaluator) {
                opt.evaluator(phi, pos, tan);
            } else {
                // Nearest sample; the marker is a rendering aid only.
                const auto n = c.samples.size();
                const auto k = static_cast<std::size_t>(std::lround(phi / (2 * std::numbers::pi) * n)) % n;
                pos = {c.samples[k].x, c.samples[k].y};
            }
            out.push_back({pos[0], pos[1], SvgMarker::Kind::Cusp});
        }
        for (const auto& x : r.crossings)
            out.push_back({x.x, x.y, x.transversal ? SvgMarker::Kind::Crossing : SvgMarker::Kind::Tangency});
    } catch (const Error&) {
    }
    return out;
}

std::string eps_tag(int e) { return e > 0 ? "p" : "m"; }

std::string cmd_geodesic(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    LaunchSpec l;
    l.phi = cfg.geodesic.phi;
    l.rho = cfg.geodesic.rho;
    l.s_max = cfg.geodesic.s_max;
    l.tol = cfg.geodesic.tol;
    const Trajectory tr = integrate(m, l, false);
    write_file(out / "trajectory.csv", trajectory_csv(tr));
    return "geodesic: " + std::to_string(tr.samples.size()) + " samples -> trajectory.csv";
}

std::string cmd_front(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    const auto& f = cfg.front;
    const auto pts = wave_front(m, f.s, f.n_phi, f.n_r, f.rho_min, f.rho_max, f.tol);
    write_file(out / "front.csv", front_csv(pts));
    std::vector<SvgPolyline> rings(f.n_r);
    for (int i = 0; i < f.n_phi; ++i)
        for (int k = 0; k < f.n_r; ++k) {
            const auto& p = pts[static_cast<std::size_t>(i) * f.n_r + k];
            rings[k].points.push_back({p.x, p.y});
        }
    write_file(out / "front.svg", render_svg(rings, {}, "wave front s=" + fmt17(f.s) + " (x,y) per rho"));
    return "front: " + std::to_string(pts.size()) + " points -> front.csv, front.svg";
}

std::string cmd_conjugate(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    std::vector<ConjugatePoint> pts;
    for (double phi : cfg.conjugate.phis)
        for (double rho : cfg.conjugate.rhos) pts.push_back(first_conjugate(m, phi, rho, cfg.conj));
    write_file(out / "conjugate.csv", conjugate_csv(pts));
    return "conjugate: " + std::to_string(pts.size()) + " points -> conjugate.csv";
}

std::string cmd_section(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    std::string summary = "section:";
    for (std::size_t k = 0; k < cfg.section.levels.size(); ++k) {
        const double c = cfg.section.levels[k];
        const PlanarCurve curve = conjugate_section(m, c, cfg.section.n_phi, cfg.conj);
        const std::string stem = "section_" + std::to_string(k);
        write_file(out / (stem + ".csv"), section_csv(curve));
        ClassifyOptions opt;
        opt.cusp_frac = cfg.classify.cusp_frac;
        opt.tangency_tol = cfg.classify.tangency_tol;
        opt.level_h = std::sqrt(std::abs(c) / std::numbers::pi);
        write_file(out / (stem + ".svg"),
                   render_svg({curve_polyline(curve)}, curve_markers(curve, opt), "section w=" + fmt17(c)));
        summary += " " + stem + ".csv";
    }
    return summary;
}

std::string cmd_asymptotic(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    const Invariants& inv = m.inv();
    std::string summary = "asymptotic:";
    for (std::size_t k = 0; k < cfg.asymptotic.hs.size(); ++k) {
        const double h = cfg.asymptotic.hs[k];
        for (int e : cfg.asymptotic.epsilons) {
            const FSeries fs = build_fseries(inv, e, cfg.formula_set);
            const PlanarCurve curve = asymptotic_section(fs, h, cfg.asymptotic.n_phi);
            const std::string stem = "asymptotic_" + std::to_string(k) + "_" + eps_tag(e);
            write_file(out / (stem + ".csv"), section_csv(curve));
            // Cusp and crossing markers are located on the normalized shape, which is what
            // the classifier sees; the CSV keeps the physical curve.
            const PlanarCurve shape = normalized_section(fs, h, cfg.asymptotic.n_phi);
            write_file(out / (stem + ".svg"),
                       render_svg({curve_polyline(shape)}, curve_markers(shape, asymptotic_options(fs, h)),
                                  "(CL - f4 h^4) / h^" + std::to_string(leading_shape_order(fs)) + " through f" +
                                      std::to_string(fs.order()) + " h=" + fmt17(h)));
            summary += " " + stem + ".csv";
        }
    }
    if (inv.abs_r2() <= kStratTol) {
        write_file(out / "audit.txt", audit_table(formula_audit(inv, cfg.asymptotic.audit_grid)));
    } else {
        write_file(out / "audit.txt", "identity, max_residual, grid_size, verdict\n# skipped: r2 != 0, identities need r2 = 0\n");
    }
    return summary + " audit.txt";
}

std::string cmd_classify(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    ojson reports = ojson::array();
    auto tune = [&](ClassifyOptions o) {
        o.cusp_frac = cfg.classify.cusp_frac;
        o.tangency_tol = cfg.classify.tangency_tol;
        return o;
    };
    std::string summary = "classify:";
    if (cfg.classify.source == "numeric") {
        for (double c : cfg.classify.levels) {
            const PlanarCurve curve = conjugate_section(m, c, cfg.classify.n_phi, cfg.conj);
            ClassifyOptions opt;
            opt.level_h = std::sqrt(std::abs(c) / std::numbers::pi);
            const SymbolReport r = classify_curve(curve, tune(opt));
            reports.push_back(ojson::parse(symbol_report_json(r)));
            summary += " " + r.symbol.to_string() + "=" + r.matches;
        }
    } else {
        for (double h : cfg.classify.hs)
            for (int e : {1, -1}) {
                const FSeries fs = build_fseries(m.inv(), e, cfg.formula_set);
                const SymbolReport r = classify_asymptotic(fs, h, cfg.classify.n_phi, tune({}));
                reports.push_back(ojson::parse(symbol_report_json(r)));
                summary += " " + r.symbol.to_string() + "=" + r.matches;
            }
    }
    write_file(out / "classify.json", reports.dump(2) + "\n");
    return summary;
}

std::string cmd_stratify(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    const StratumReport r = classify(m.inv(), cfg.formula_set);
    write_file(out / "stratify.json", stratum_json(r) + "\n");
    return std::string("stratify: ") + to_string(r.stratum);
}

std::string cmd_sweep(const RunConfig& cfg, const fs::path& out) {
    if (!cfg.family) throw Error("config: sweep needs a 'family'");
    const FamilySpec fam = *cfg.family;
    const SweepResult r =
        sweep_family([&](double l) { return fam.at(l); }, cfg.sweep.lambda0, cfg.sweep.lambda1, cfg.sweep.steps);
    std::string csv = "lambda,abs_r2,stratum\n";
    for (const auto& s : r.samples) csv += fmt17(s.lambda) + "," + fmt17(s.abs_r2) + "," + to_string(s.stratum) + "\n";
    write_file(out / "sweep.csv", csv);
    ojson j;
    j["c_crossings"] = r.c_crossings;
    ojson strata = ojson::array();
    for (auto s : r.crossing_strata) strata.push_back(to_string(s));
    j["crossing_strata"] = strata;
    write_file(out / "sweep.json", j.dump(2) + "\n");
    std::string summary = "sweep: " + std::to_string(r.c_crossings.size()) + " crossing(s) of C";
    for (std::size_t k = 0; k < r.c_crossings.size(); ++k)
        summary += " [lambda=" + fmt17(r.c_crossings[k]) + " " + to_string(r.crossing_strata[k]) + "]";
    return summary;
}

std::string cmd_compare(const RunConfig& cfg, const fs::path& out) {
    const MetricModel m = cfg.metric();
    std::string table;
    for (int e : cfg.compare.epsilons) {
        const FSeries fs = build_fseries(m.inv(), e, cfg.formula_set);
        const std::string t = contact_table(contact_residuals(m, fs, cfg.compare.hs, cfg.compare.n_phi, cfg.conj));
        table += table.empty() ? t : t.substr(t.find('\n') + 1);
    }
    write_file(out / "compare.csv", table);
    return "compare:\n" + table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"geodesic", "front",    "conjugate", "section", "asymptotic",
                                                   "classify", "stratify", "sweep",     "compare"};
    return names;
}

std::string run_command(const std::string& command, const RunConfig& cfg, const std::string& out_dir) {
    using Fn = std::string (*)(const RunConfig&, const fs::path&);
    static const std::vector<std::pair<std::string, Fn>> table = {
        {"geodesic", cmd_geodesic}, {"front", cmd_front},       {"conjugate", cmd_conjugate},
        {"section", cmd_section},   {"asymptotic", cmd_asymptotic}, {"classify", cmd_classify},
        {"stratify", cmd_stratify}, {"sweep", cmd_sweep},       {"compare", cmd_compare},
    };
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == command; });
    if (it == table.end()) throw Error("unknown command: " + command);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create output directory " + out_dir + ": " + ec.message());
    try {
        return it->second(cfg, fs::path(out_dir));
    } catch (const Error& e) {
        throw Error(command + ": " + e.what());
    }
}

}  // namespace didolocus
