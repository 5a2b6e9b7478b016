// Internal integration engine shared by the geodesic and conjugate-point modules.
#pragma once

#include <array>
#include <cmath>

#include "didolocus/geodesic_flow.hpp"

namespace didolocus::detail {

inline constexpr int kPhase = 6;
inline constexpr int kFull = 18;
using State = std::array<double, kFull>;

/// Right-hand side of the Hamiltonian system and, optionally, its variational system
/// for two tangent columns.
class FlowSystem {
public:
    FlowSystem(const MetricModel& m, bool with_tangents) : m_(m), tangents_(with_tangents) {}

    bool with_tangents() const { return tangents_; }
    int dim() const { return tangents_ ? kFull : kPhase; }

    void rhs(const State& y, State& dy) const;

private:
    const MetricModel& m_;
    bool tangents_;
};

/// One embedded DOP853 step with a scaled RMS error norm.
struct StepOutcome {
    State y_new{};
    State f_new{};
    double err_norm = 0;
};

StepOutcome dop853_step(const FlowSystem& sys, const State& y, const State& f0, double h, const State& atol,
                        double rtol);

/// Drives accepted steps forward (or backward when direction < 0).
class Stepper {
public:
    Stepper(const FlowSystem& sys, const State& y0, double s0, double tol, const State& scale, double max_step,
            double h0);

    /// Takes one accepted step, never passing s_end. Returns the accepted step size.
    double advance(double s_end);

    double s() const { return s_; }
    const State& y() const { return y_; }
    const State& f() const { return f_; }

    /// A single step of size h from (s0, y0, f0) without error control. Accurate to the
    /// tolerance when |h| does not exceed an accepted step size from that point.
    State jump(const State& y0, const State& f0, double h) const;

private:
    const FlowSystem& sys_;
    State y_{}, f_{}, atol_{};
    double s_, rtol_, max_step_, h_;
};

/// Natural magnitudes of the state components for a launch with parameter rho.
State natural_scale(double rho);

/// Initial phase point and tangent columns for a launch (phi, rho).
State launch_state(double phi, double rho, bool with_tangents);

inline GeodesicState to_geodesic_state(const State& y, double s) {
    return {y[0], y[1], y[2], y[3], y[4], y[5], s};
}

/// d(x, y, w)/d(phi, rho, s) from a full state and its derivative.
inline Mat3 position_jacobian(const State& y, const State& f) {
    Mat3 m{};
    for (int i = 0; i < 3; ++i) {
        m[i][0] = y[kPhase + i];
        m[i][1] = y[2 * kPhase + i];
        m[i][2] = f[i];
    }
    return m;
}

}  // namespace didolocus::detail
