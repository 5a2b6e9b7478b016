/// Numerical cross-checks of the closed-form expansion against the exponential map,
/// and the plain-text formula-audit table.
#pragma once

#include <string>
#include <vector>

#include "didolocus/asymptotics.hpp"
#include "didolocus/expmap_conjugate.hpp"

namespace didolocus {

struct AuditRow {
    std::string identity;
    double max_residual = 0;
    int grid_size = 0;
    std::string verdict;
};

/// Wedge and d7 identities for both formula sets on a uniform grid of `grid` angles.
/// Rows are prefixed with the formula set ("printed: ", "verified: ").
std::vector<AuditRow> formula_audit(const Invariants& inv, int grid = 720);

/// "identity, max_residual, grid_size, verdict" followed by one line per row.
std::string audit_table(const std::vector<AuditRow>& rows);

/// Symmetric Hausdorff distance between two closed polylines (point to segment).
double curve_distance(const PlanarCurve& a, const PlanarCurve& b);

/// Largest distance from a sample of `from` to the polyline of `to`. With `to` sampled
/// densely this measures how far `from` strays from the reference curve without the
/// chord error of its own sampling.
double curve_deviation(const PlanarCurve& from, const PlanarCurve& to);

/// Largest pointwise gap between samples sharing a launch angle.
double pointwise_distance(const PlanarCurve& a, const PlanarCurve& b);

struct ContactRow {
    double h = 0;
    double level = 0;
    int epsilon = 1;
    double pointwise = 0;
    double deviation = 0;
    /// deviation / h^(order + 1), where order is the last term of the expansion used.
    double scaled = 0;
};

/// Numerical section at level eps*pi*h^2 against the truncated expansion, one row per h.
/// The expansion curve is sampled `refine` times more densely than the numerical one.
std::vector<ContactRow> contact_residuals(const MetricModel& m, const FSeries& fs, const std::vector<double>& hs,
                                          int n_phi, const ConjugateOptions& opt = {}, int refine = 8);

std::string contact_table(const std::vector<ContactRow>& rows);

}  // namespace didolocus
