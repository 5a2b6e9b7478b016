#include "didolocus/expmap_conjugate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "flow_engine.hpp"

namespace didolocus {

using std::numbers::pi;

std::array<double, 3> exp_map(const MetricModel& m, double phi, double rho, double s, double tol) {
    LaunchSpec l;
    l.phi = phi;
    l.rho = rho;
    l.s_max = s;
    l.tol = tol;
    const Trajectory tr = integrate(m, l, false);
    const auto& e = tr.samples.back();
    return {e.x, e.y, e.w};
}

namespace {

int sign_of(double v) { return (v > 0) - (v < 0); }

struct Evaluated {
    detail::State y;
    double det;
};

}  // namespace

ConjugatePoint first_conjugate(const MetricModel& m, double phi, double rho, const ConjugateOptions& opt) {
    if (rho == 0) throw Error("rho must be nonzero");
    const double a = std::abs(rho);
    const double s_min = opt.t_min * a, s_max = opt.t_max * a;

    detail::FlowSystem sys(m, true);
    detail::Stepper st(sys, detail::launch_state(phi, rho, true), 0.0, opt.tol, detail::natural_scale(rho),
                       opt.max_step, 0.02 * a);

    auto eval_at = [&](const detail::State& y0, const detail::State& f0, double dh) {
        Evaluated e;
        e.y = st.jump(y0, f0, dh);
        detail::State f{};
        sys.rhs(e.y, f);
        e.det = det3(detail::position_jacobian(e.y, f));
        return e;
    };

    int ref = 0;
    detail::State y_prev = st.y(), f_prev = st.f();
    double s_prev = 0, det_prev = 0;
    try {
        while (st.s() < s_max) {
            y_prev = st.y();
            f_prev = st.f();
            s_prev = st.s();
            st.advance(s_max);
            const double det = det3(detail::position_jacobian(st.y(), st.f()));
            if (st.s() < s_min) continue;
            if (ref == 0) {
                ref = sign_of(det);
                det_prev = det;
                continue;
            }
            if (sign_of(det) != ref) {
                // Illinois regula falsi on [s_prev, s]; every trial is one fresh step from
                // the accepted state at s_prev, so the determinant is evaluated at full accuracy.
                double lo = s_prev, hi = st.s();
                double flo = det_prev, fhi = det;
                if (sign_of(flo) != ref) {
                    // The previous accepted step was before s_min; evaluate it properly.
                    flo = eval_at(y_prev, f_prev, 0.0).det;
                }
                int side = 0;
                double c = hi;
                for (int it = 0; it < 200; ++it) {
                    c = (fhi - flo) != 0 ? hi - fhi * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
                    if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
                    const double fc = eval_at(y_prev, f_prev, c - s_prev).det;
                    if (fc == 0) {
                        lo = hi = c;
                        flo = fhi = 0;
                        break;
                    }
                    if (sign_of(fc) == sign_of(flo)) {
                        lo = c;
                        flo = fc;
                        if (side == -1) fhi *= 0.5;
                        side = -1;
                    } else {
                        hi = c;
                        fhi = fc;
                        if (side == 1) flo *= 0.5;
                        side = 1;
                    }
                    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
                }
                const double s_c = 0.5 * (lo + hi);
                const Evaluated at = eval_at(y_prev, f_prev, s_c - s_prev);
                ConjugatePoint cp;
                cp.phi = phi;
                cp.rho = rho;
                cp.s_c = s_c;
                cp.t_c = s_c * at.y[5];
                cp.x = at.y[0];
                cp.y = at.y[1];
                cp.w = at.y[2];
                cp.epsilon = cp.w >= 0 ? 1 : -1;
                cp.h = std::sqrt(cp.epsilon * cp.w / pi);
                cp.bracket_lo = lo;
                cp.bracket_hi = hi;
                cp.det_lo = eval_at(y_prev, f_prev, lo - s_prev).det;
                cp.det_hi = eval_at(y_prev, f_prev, hi - s_prev).det;
                return cp;
            }
            det_prev = det;
        }
    } catch (const Error& e) {
        if (std::string(e.what()) == "outside normal-form domain") {
            char buf[64];
            std::snprintf(buf, sizeof buf, "domain exit at s = %.17g", st.s());
            throw Error(buf);
        }
        throw;
    }
    throw Error("no conjugate point in range");
}

ConjugatePoint conjugate_at_level(const MetricModel& m, double phi, double level, double seed_rho,
                                  const ConjugateOptions& opt) {
    if (level == 0) throw Error("section level must be nonzero");
    const double wtol = 1e-12 * std::abs(level);
    double rho = seed_rho;
    if (rho == 0 || (rho > 0) != (level > 0)) rho = std::copysign(std::sqrt(std::abs(level) / pi), level);
    try {
        ConjugatePoint cp = first_conjugate(m, phi, rho, opt);
        double rho_old = 0, res_old = 0;
        for (int it = 0; it < 40; ++it) {
            const double res = cp.w - level;
            if (std::abs(res) <= wtol) return cp;
            double next;
            if (it < 2 || res == res_old) {
                // w grows like pi rho^2 near the origin, which makes this fixed point contract fast.
                if (!(cp.w / level > 0)) break;
                next = rho * std::sqrt(level / cp.w);
            } else {
                next = rho - res * (rho - rho_old) / (res - res_old);
            }
            if (!std::isfinite(next) || next == 0 || (next > 0) != (level > 0)) break;
            rho_old = rho;
            res_old = res;
            rho = next;
            cp = first_conjugate(m, phi, rho, opt);
        }
    } catch (const Error& e) {
        throw Error(std::string("section level out of reach: ") + e.what());
    }
    throw Error("section level out of reach");
}

PlanarCurve conjugate_section(const MetricModel& m, double c, int n_phi, const ConjugateOptions& opt) {
    if (c == 0) throw Error("section level must be nonzero");
    if (n_phi < 1) throw Error("n_phi must be positive");
    PlanarCurve curve;
    curve.level = c;
    curve.epsilon = c > 0 ? 1 : -1;
    curve.samples.reserve(n_phi);
    double seed = std::copysign(std::sqrt(std::abs(c) / pi), c);
    for (int k = 0; k < n_phi; ++k) {
        const double phi = 2 * pi * k / n_phi;
        const ConjugatePoint cp = conjugate_at_level(m, phi, c, seed, opt);
        seed = cp.rho;
        curve.samples.push_back({phi, cp.x, cp.y});
    }
    return curve;
}

std::vector<FrontPoint> wave_front(const MetricModel& m, double s, int n_phi, int n_r, double rho_min,
                                   double rho_max, double tol) {
    if (!(s > 0)) throw Error("front radius s must be positive");
    if (n_phi < 1 || n_r < 1) throw Error("front grid sizes must be positive");
    std::vector<FrontPoint> out;
    out.reserve(static_cast<std::size_t>(n_phi) * n_r);
    for (int i = 0; i < n_phi; ++i) {
        const double phi = 2 * pi * i / n_phi;
        for (int j = 0; j < n_r; ++j) {
            const double rho = n_r == 1 ? rho_min : rho_min + (rho_max - rho_min) * j / (n_r - 1);
            const auto p = exp_map(m, phi, rho, s, tol);
            out.push_back({phi, rho, p[0], p[1], p[2]});
        }
    }
    return out;
}

}  // namespace didolocus
