/// Exponential map from the origin, first conjugate points and conjugate-locus
/// plane sections.
#pragma once

#include <array>
#include <numbers>
#include <string>
#include <vector>

#include "didolocus/geodesic_flow.hpp"

namespace didolocus {

struct ConjugateOptions {
    /// Integrator tolerance for conjugate searches. Finer than the trajectory default
    /// because section features live at the h^6 scale.
    double tol = 1e-12;
    /// Search window in rescaled time t = s / |rho|. The determinant behaves like s^4
    /// near the origin, so sign tracking starts at t_min.
    double t_min = std::numbers::pi / 2;
    double t_max = 3 * std::numbers::pi;
    double max_step = std::numbers::pi / 50;
};

struct ConjugatePoint {
    double phi = 0;
    double rho = 0;
    double s_c = 0;
    double t_c = 0;
    double x = 0, y = 0, w = 0;
    double h = 0;
    int epsilon = 1;
    /// Final bracket [s_c - delta_minus, s_c + delta_plus] and determinant values at its ends.
    double bracket_lo = 0, bracket_hi = 0;
    double det_lo = 0, det_hi = 0;
};

/// A sampled closed curve in the plane w = level; phi is the launch angle.
struct CurveSample {
    double phi, x, y;
};

struct PlanarCurve {
    double level = 0;
    int epsilon = 1;
    std::vector<CurveSample> samples;
    bool closed = true;
};

struct FrontPoint {
    double phi, rho, x, y, w;
};

std::array<double, 3> exp_map(const MetricModel& m, double phi, double rho, double s, double tol = 1e-12);

/// First sign change of det[d/dphi, d/drho, d/ds](x, y, w) for t in (t_min, t_max].
/// Error: "no conjugate point in range".
ConjugatePoint first_conjugate(const MetricModel& m, double phi, double rho, const ConjugateOptions& opt = {});

/// Solves w(first_conjugate(phi, rho)) = level for rho, starting from seed_rho.
ConjugatePoint conjugate_at_level(const MetricModel& m, double phi, double level, double seed_rho,
                                  const ConjugateOptions& opt = {});

/// Section of the first conjugate locus by w = c on a uniform phi grid.
/// Error: "section level out of reach".
PlanarCurve conjugate_section(const MetricModel& m, double c, int n_phi, const ConjugateOptions& opt = {});

/// exp_map over a (phi, rho) grid at fixed arclength s. rho runs linearly from rho_min
/// to rho_max (rho_min alone when n_r = 1).
std::vector<FrontPoint> wave_front(const MetricModel& m, double s, int n_phi, int n_r, double rho_min = 0.1,
                                   double rho_max = 1.0, double tol = 1e-12);

}  // namespace didolocus
