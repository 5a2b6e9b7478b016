/// Cusps, self-intersections and the symbol of a sampled conjugate-locus section.
///
/// The symbol lists, for each arc between consecutive cusps, half the number of crossing
/// parameters that fall in that arc. Entries are stored doubled so they stay integral.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "didolocus/asymptotics.hpp"
#include "didolocus/expmap_conjugate.hpp"

namespace didolocus {

inline constexpr double kCuspFrac = 0.05;
inline constexpr double kTangencyTol = 1e-3;
/// Level h at which the tangency tolerance applies unscaled (see ClassifyOptions).
inline constexpr double kTangencyRefH = 0.1;

struct CuspSet {
    std::vector<double> params;
    std::vector<double> speed_min;  // discrete speed at the minimum, relative to the median
    std::vector<double> turning;    // angle between the incoming and outgoing chords
};

/// Position and derivative of a closed curve at parameter phi.
using CurveEvaluator = std::function<void(double phi, std::array<double, 2>& pos, std::array<double, 2>& tangent)>;

struct Crossing {
    double phi_a = 0, phi_b = 0;
    double x = 0, y = 0;
    double angle = 0;
    bool transversal = true;
};

struct Symbol {
    std::vector<int> doubled;
    bool canonical = false;

    std::string to_string() const;
    bool operator==(const Symbol& o) const { return doubled == o.doubled; }
};

struct ClassifyOptions {
    double cusp_frac = kCuspFrac;
    double tangency_tol = kTangencyTol;
    /// When set, the tangency tolerance is multiplied by min(1, h / kTangencyRefH).
    /// Crossing angles between the two sheets of a section on C shrink linearly with h,
    /// so a fixed angle would misreport every small-level crossing as tangential.
    std::optional<double> level_h;
    /// Analytic evaluator used to refine crossings; cubic interpolation otherwise.
    CurveEvaluator evaluator;
};

/// Error: "smooth curve, no cusps".
CuspSet detect_cusps(const PlanarCurve& curve, double cusp_frac = kCuspFrac);

/// All crossings (transversal or flagged) of the closed polyline, refined on the arcs.
std::vector<Crossing> self_intersections(const PlanarCurve& curve, const ClassifyOptions& opt = {});

Symbol canonicalize(const Symbol& s);

/// "S1".."S7" when the canonical symbol matches an admissible symbol, else "other".
std::string match_admissible(const Symbol& s);

const std::vector<std::pair<std::string, Symbol>>& admissible_symbols();

struct SymbolReport {
    double level = 0;
    int epsilon = 1;
    CuspSet cusps;
    std::vector<Crossing> crossings;
    Symbol symbol;
    std::string matches;
};

/// Errors: "degenerate arc boundary" when a crossing parameter sits on a cusp.
SymbolReport classify_curve(const PlanarCurve& curve, const ClassifyOptions& opt = {});

Symbol symbol(const PlanarCurve& curve, const ClassifyOptions& opt = {});

std::string symbol_report_json(const SymbolReport& r);

struct FullLocusReport {
    SymbolReport plus, minus;
    bool equal = false;
    std::string message;
};

/// Numerical sections at +c and -c from the exponential map.
FullLocusReport check_full_locus(const MetricModel& m, double c, int n_phi = 720, const ConjugateOptions& copt = {});

/// Same comparison for the truncated expansion at level h.
FullLocusReport check_full_locus_asymptotic(const Invariants& inv, double h, int n_phi = 720,
                                            FormulaSet set = FormulaSet::Printed);

/// Classification options for normalized_section(fs, h, n), with the analytic evaluator.
ClassifyOptions asymptotic_options(const FSeries& fs, double h);

/// Symbol report of the truncated expansion at level h, computed on the normalized shape.
SymbolReport classify_asymptotic(const FSeries& fs, double h, int n_phi, const ClassifyOptions& tune = {});

}  // namespace didolocus
