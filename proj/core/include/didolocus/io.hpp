/// Artifact formats, run configuration and the command driver behind the `didolocus` tool.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "didolocus/asymptotics.hpp"
#include "didolocus/expmap_conjugate.hpp"
#include "didolocus/metric_model.hpp"

namespace didolocus {

// ─── CSV ─────────────────────────────────────────────────────────────────────

/// "# level=<c> epsilon=<+1|-1>" then "phi,x,y", 17 significant digits.
std::string section_csv(const PlanarCurve& c);
PlanarCurve parse_section_csv(const std::string& text);

/// "phi,rho,x,y,w".
std::string front_csv(const std::vector<FrontPoint>& pts);

/// "phi,rho,s_c,t_c,x,y,w,h,epsilon".
std::string conjugate_csv(const std::vector<ConjugatePoint>& pts);

// ─── SVG ─────────────────────────────────────────────────────────────────────

struct SvgPolyline {
    std::vector<std::array<double, 2>> points;
    bool closed = true;
    std::string stroke = "#1f4e9c";
};

struct SvgMarker {
    double x = 0, y = 0;
    enum class Kind { Cusp, Crossing, Tangency } kind = Kind::Cusp;
};

/// Pure rendering: fits the data box into the canvas with one uniform scale, which is
/// printed in a leading comment. Nothing is computed from the curve geometry.
std::string render_svg(const std::vector<SvgPolyline>& lines, const std::vector<SvgMarker>& markers,
                       const std::string& title, int width = 640, int height = 640);

// ─── Configuration ───────────────────────────────────────────────────────────

struct AffineTerm {
    int i = 0, j = 0;
    double c0 = 0, c1 = 0;  // coefficient = c0 + c1 * lambda
};

struct FamilySpec {
    std::vector<AffineTerm> terms;
    BetaJet at(double lambda) const;
};

struct RunConfig {
    std::optional<std::string> metric_json;  // normalised metric document
    int quadrature_order = 32;
    std::optional<FamilySpec> family;
    ConjugateOptions conj;
    FormulaSet formula_set = FormulaSet::Printed;

    struct {
        double phi = 0, rho = 1, s_max = 2 * 3.14159265358979323846, tol = 1e-10;
    } geodesic;
    struct {
        double s = 0.5, rho_min = 0.1, rho_max = 1.0, tol = 1e-12;
        int n_phi = 64, n_r = 8;
    } front;
    struct {
        std::vector<double> phis, rhos{0.1};
    } conjugate;
    struct {
        std::vector<double> levels{1e-3};
        int n_phi = 720;
    } section;
    struct {
        std::vector<double> hs{0.05};
        std::vector<int> epsilons{1, -1};
        int n_phi = 720, audit_grid = 720;
    } asymptotic;
    struct {
        std::string source = "asymptotic";  // or "numeric"
        std::vector<double> hs{1e-4};
        std::vector<double> levels{1e-3};
        int n_phi = 1440;
        double cusp_frac = 0.05, tangency_tol = 1e-3;
    } classify;
    struct {
        double lambda0 = -1, lambda1 = 1;
        int steps = 21;
    } sweep;
    struct {
        std::vector<double> hs{0.1, 0.05};
        std::vector<int> epsilons{1};
        int n_phi = 360;
    } compare;

    MetricModel metric() const;
};

/// Parses a run configuration. `metric` is either an inline metric document or a path
/// resolved against base_dir. Errors carry the offending key.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

const std::vector<std::string>& command_names();

/// Executes one command and writes its artifacts into out_dir. Returns a short summary.
/// Errors: "unknown command: <name>" and every numerical error, with context prepended.
std::string run_command(const std::string& command, const RunConfig& cfg, const std::string& out_dir);

}  // namespace didolocus
