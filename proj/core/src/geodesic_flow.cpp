#include "didolocus/geodesic_flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>

#include "dop853_tableau.hpp"
#include "flow_engine.hpp"

namespace didolocus {

namespace detail {

// ─── Vector field ────────────────────────────────────────────────────────────

void FlowSystem::rhs(const State& y, State& dy) const {
    const FrameJet fj = m_.frame_jet(y[0], y[1]);
    const double psi[3] = {y[3], y[4], y[5]};

    // u = psi.F and v = psi.G with their (x, y) derivatives through second order.
    Jet2 u, v;
    for (int k = 0; k < 3; ++k) {
        u = u + fj.F[k] * psi[k];
        v = v + fj.G[k] * psi[k];
    }

    // Gradient of H = (u^2 + v^2)/2 over (x, y, w, pt, qt, rr).
    double ua[6] = {u.x, u.y, 0, fj.F[0].v, fj.F[1].v, fj.F[2].v};
    double va[6] = {v.x, v.y, 0, fj.G[0].v, fj.G[1].v, fj.G[2].v};
    double grad[6];
    for (int a = 0; a < 6; ++a) grad[a] = u.v * ua[a] + v.v * va[a];

    dy[0] = grad[3];
    dy[1] = grad[4];
    dy[2] = grad[5];
    dy[3] = -grad[0];
    dy[4] = -grad[1];
    dy[5] = -grad[2];
    if (!tangents_) return;

    // Hessian H_ab = u_a u_b + v_a v_b + u u_ab + v v_ab; u is linear in psi, so the only
    // second derivatives are in (x, y) and the mixed (x or y, psi_k) entries F_k,x and F_k,y.
    double H[6][6];
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) H[a][b] = ua[a] * ua[b] + va[a] * va[b];
    H[0][0] += u.v * u.xx + v.v * v.xx;
    H[0][1] += u.v * u.xy + v.v * v.xy;
    H[1][1] += u.v * u.yy + v.v * v.yy;
    H[1][0] = H[0][1];
    for (int k = 0; k < 3; ++k) {
        const double mx = u.v * fj.F[k].x + v.v * fj.G[k].x;
        const double my = u.v * fj.F[k].y + v.v * fj.G[k].y;
        H[0][3 + k] += mx;
        H[3 + k][0] += mx;
        H[1][3 + k] += my;
        H[3 + k][1] += my;
    }

    for (int col = 0; col < 2; ++col) {
        const double* d = &y[kPhase * (col + 1)];
        double Hd[6];
        for (int a = 0; a < 6; ++a) {
            double s = 0;
            for (int b = 0; b < 6; ++b) s += H[a][b] * d[b];
            Hd[a] = s;
        }
        double* out = &dy[kPhase * (col + 1)];
        out[0] = Hd[3];
        out[1] = Hd[4];
        out[2] = Hd[5];
        out[3] = -Hd[0];
        out[4] = -Hd[1];
        out[5] = -Hd[2];
    }
}

// ─── DOP853 step ─────────────────────────────────────────────────────────────

StepOutcome dop853_step(const FlowSystem& sys, const State& y, const State& f0, double h, const State& atol,
                        double rtol) {
    namespace t = dop853;
    const int n = sys.dim();
    std::array<State, t::kStages + 1> K{};
    K[0] = f0;
    State tmp{};
    for (int s = 1; s < t::kStages; ++s) {
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (int j = 0; j < s; ++j) acc += t::A[s][j] * K[j][i];
            tmp[i] = y[i] + h * acc;
        }
        sys.rhs(tmp, K[s]);
    }
    StepOutcome out;
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int j = 0; j < t::kStages; ++j) acc += t::B[j] * K[j][i];
        out.y_new[i] = y[i] + h * acc;
    }
    sys.rhs(out.y_new, out.f_new);
    K[t::kStages] = out.f_new;

    double e5 = 0, e3 = 0;
    for (int i = 0; i < n; ++i) {
        double a5 = 0, a3 = 0;
        for (int j = 0; j <= t::kStages; ++j) {
            a5 += t::E5[j] * K[j][i];
            a3 += t::E3[j] * K[j][i];
        }
        const double sc = atol[i] + rtol * std::max(std::abs(y[i]), std::abs(out.y_new[i]));
        e5 += (a5 / sc) * (a5 / sc);
        e3 += (a3 / sc) * (a3 / sc);
    }
    if (e5 == 0 && e3 == 0) {
        out.err_norm = 0;
    } else {
        out.err_norm = std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * n);
    }
    return out;
}

// ─── Stepper ─────────────────────────────────────────────────────────────────

Stepper::Stepper(const FlowSystem& sys, const State& y0, double s0, double tol, const State& scale, double max_step,
                 double h0)
    : sys_(sys), y_(y0), s_(s0), rtol_(tol), max_step_(max_step), h_(h0) {
    for (int i = 0; i < kFull; ++i) atol_[i] = tol * scale[i];
    sys_.rhs(y_, f_);
}

double Stepper::advance(double s_end) {
    const double dir = s_end >= s_ ? 1.0 : -1.0;
    const double min_step = 1e-14 * std::max(1.0, std::abs(s_));
    bool rejected = false;
    for (;;) {
        double h = std::min({h_, max_step_, std::abs(s_end - s_)});
        if (h < min_step && std::abs(s_end - s_) > min_step) throw Error("stiff or singular trajectory");
        StepOutcome o = dop853_step(sys_, y_, f_, dir * h, atol_, rtol_);
        if (!std::isfinite(o.err_norm)) {
            h_ = 0.2 * h;
            rejected = true;
            continue;
        }
        if (o.err_norm < 1) {
            double factor = o.err_norm == 0 ? 10.0 : std::min(10.0, 0.9 * std::pow(o.err_norm, -1.0 / 8));
            if (rejected) factor = std::min(1.0, factor);
            // A step shortened to land on s_end says nothing about the natural step size.
            const bool clipped = h < std::min(h_, max_step_);
            if (!clipped) h_ = h * factor;
            s_ += dir * h;
            y_ = o.y_new;
            f_ = o.f_new;
            return h;
        }
        h_ = h * std::max(0.2, 0.9 * std::pow(o.err_norm, -1.0 / 8));
        rejected = true;
    }
}

State Stepper::jump(const State& y0, const State& f0, double h) const {
    return dop853_step(sys_, y0, f0, h, atol_, rtol_).y_new;
}

State natural_scale(double rho) {
    const double a = std::abs(rho);
    const double base[6] = {a, a, a * a, 1, 1, 1 / a};
    State sc{};
    for (int i = 0; i < 6; ++i) {
        sc[i] = base[i];
        sc[kPhase + i] = base[i];
        sc[2 * kPhase + i] = base[i] / a;
    }
    return sc;
}

State launch_state(double phi, double rho, bool with_tangents) {
    State y{};
    y[3] = std::cos(phi);
    y[4] = std::sin(phi);
    y[5] = 1 / rho;
    if (with_tangents) {
        y[kPhase + 3] = -std::sin(phi);
        y[kPhase + 4] = std::cos(phi);
        y[2 * kPhase + 5] = -1 / (rho * rho);
    }
    return y;
}

}  // namespace detail

// ─── Public API ──────────────────────────────────────────────────────────────

double hamiltonian(const MetricModel& m, const GeodesicState& st) {
    const FrameFields ff = m.frame_fields(st.x, st.y);
    const double u = st.pt * ff.F[0] + st.qt * ff.F[1] + st.rr * ff.F[2];
    const double v = st.pt * ff.G[0] + st.qt * ff.G[1] + st.rr * ff.G[2];
    return 0.5 * (u * u + v * v);
}

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

namespace {

void record(Trajectory& tr, const detail::State& y, const detail::State& f, double s, bool sens) {
    tr.samples.push_back(detail::to_geodesic_state(y, s));
    if (sens) {
        tr.sensitivities.push_back(detail::position_jacobian(y, f));
        std::array<double, 12> t{};
        std::copy(y.begin() + detail::kPhase, y.end(), t.begin());
        tr.tangents.push_back(t);
    }
}

Trajectory run(const MetricModel& m, const detail::State& y0, double s_end, double tol, double rho_scale,
               double max_step, bool sens) {
    if (!(tol > 0)) throw Error("tol must be positive");
    detail::FlowSystem sys(m, sens);
    Trajectory tr;
    double s_now = 0;
    try {
        detail::Stepper st(sys, y0, 0.0, tol, detail::natural_scale(rho_scale), max_step,
                           std::min(max_step, 0.02 * std::abs(rho_scale)));
        record(tr, st.y(), st.f(), 0.0, sens);
        while (std::abs(st.s()) < std::abs(s_end)) {
            st.advance(s_end);
            s_now = st.s();
            record(tr, st.y(), st.f(), st.s(), sens);
        }
    } catch (const Error& e) {
        if (std::string(e.what()) == "outside normal-form domain") {
            char buf[64];
            std::snprintf(buf, sizeof buf, "domain exit at s = %.17g", s_now);
            throw Error(buf);
        }
        throw;
    }
    return tr;
}

}  // namespace

Trajectory integrate(const MetricModel& m, const LaunchSpec& launch, bool with_sensitivities) {
    if (launch.rho == 0) throw Error("rho must be nonzero");
    if (!(launch.s_max >= 0)) throw Error("s_max must be non-negative");
    return run(m, detail::launch_state(launch.phi, launch.rho, with_sensitivities), launch.s_max, launch.tol,
               launch.rho, launch.max_step, with_sensitivities);
}

Trajectory integrate_from(const MetricModel& m, const GeodesicState& start, double s_end, double tol,
                          double scale_rho, double max_step) {
    detail::State y{};
    y[0] = start.x;
    y[1] = start.y;
    y[2] = start.w;
    y[3] = start.pt;
    y[4] = start.qt;
    y[5] = start.rr;
    Trajectory tr = run(m, y, s_end, tol, scale_rho, max_step, false);
    for (auto& smp : tr.samples) smp.s += start.s;
    return tr;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "s,x,y,w,pt,qt,rr\n";
    char buf[256];
    for (const auto& p : tr.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.s, p.x, p.y, p.w, p.pt, p.qt,
                      p.rr);
        out += buf;
    }
    return out;
}

}  // namespace didolocus
