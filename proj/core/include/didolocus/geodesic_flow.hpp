/// Hamiltonian geodesic flow H = ((psi.F)^2 + (psi.G)^2)/2 in arclength s, with an
/// optional variational system carrying the derivatives with respect to the launch
/// parameters (phi, rho).
///
/// The state is (x, y, w, pt, qt, rr). Launches start at the origin with
/// pt = cos(phi), qt = sin(phi), rr = 1/rho. Since H does not depend on w, rr is a
/// first integral and the rescaled time is t = rr * s.
#pragma once

#include <array>
#include <numbers>
#include <vector>

#include "didolocus/metric_model.hpp"

namespace didolocus {

struct GeodesicState {
    double x = 0, y = 0, w = 0;
    double pt = 0, qt = 0, rr = 0;
    double s = 0;
};

/// Columns are d(x, y, w)/d(phi, rho, s); the third column is the velocity.
using Mat3 = std::array<std::array<double, 3>, 3>;

struct Trajectory {
    std::vector<GeodesicState> samples;
    std::vector<Mat3> sensitivities;
    /// Full phase-space tangents d(state)/dphi (first six) and d(state)/drho (last six).
    std::vector<std::array<double, 12>> tangents;
};

struct LaunchSpec {
    double phi = 0;
    double rho = 1;
    double s_max = 2 * std::numbers::pi;
    double tol = 1e-10;
    double max_step = std::numbers::pi / 50;
};

double hamiltonian(const MetricModel& m, const GeodesicState& st);

/// Adaptive DOP853 integration over [0, s_max]. Samples are the accepted steps.
/// Errors: "stiff or singular trajectory" on step-size underflow,
/// "domain exit at s = ..." when the trajectory leaves the normal-form domain.
Trajectory integrate(const MetricModel& m, const LaunchSpec& launch, bool with_sensitivities);

/// Same as integrate, but from an arbitrary initial phase point and with negative
/// s_max allowed (backward integration). No sensitivities.
Trajectory integrate_from(const MetricModel& m, const GeodesicState& start, double s_end, double tol,
                          double scale_rho, double max_step = std::numbers::pi / 50);

/// det of the 3x3 matrix [d/dphi, d/drho, d/ds] of (x, y, w).
double det3(const Mat3& m);

/// Export as CSV with header s,x,y,w,pt,qt,rr and 17 significant digits.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace didolocus
