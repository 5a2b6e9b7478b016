#include "didolocus/metric_model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace didolocus {

namespace {

using std::numbers::pi;

double normalized_angle(double a) {
    // Keep the documented branch (-pi, pi]; std::arg returns -pi for negative zero imaginary parts.
    if (a <= -pi) a += 2 * pi;
    return a;
}

double arg_or_zero(cplx z) { return std::abs(z) == 0.0 ? 0.0 : normalized_angle(std::arg(z)); }

double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Complex polynomial in z = x + iy and w = x - iy, keyed by (power of z, power of w).
using ZW = std::map<std::pair<int, int>, cplx>;

// x^a y^b with x = (z + w)/2, y = (z - w)/(2i).
ZW monomial_to_zw(int a, int b) {
    ZW out;
    const cplx half(0.5, 0.0);
    const cplx yfac = cplx(1.0, 0.0) / cplx(0.0, 2.0);
    for (int p = 0; p <= a; ++p) {
        // ((z + w)/2)^a: z^p w^(a-p)
        const cplx cx = binomial(a, p) * std::pow(half, a);
        for (int q = 0; q <= b; ++q) {
            // ((z - w)/(2i))^b: z^q (-w)^(b-q)
            const double sign = ((b - q) % 2 == 0) ? 1.0 : -1.0;
            const cplx cy = binomial(b, q) * sign * std::pow(yfac, b);
            out[{p + q, a + b - p - q}] += cx * cy;
        }
    }
    return out;
}

ZW poly_to_zw(const Poly2& p) {
    ZW out;
    for (const auto& [key, c] : p.terms()) {
        for (const auto& [k2, v] : monomial_to_zw(key.first, key.second)) out[k2] += c * v;
    }
    return out;
}

// Real part of a (z, w) polynomial written back in x, y: z^m w^n = (x+iy)^m (x-iy)^n.
Poly2 zw_real_part(const ZW& zw) {
    std::map<Poly2::Key, cplx> acc;
    for (const auto& [key, c] : zw) {
        const int m = key.first, n = key.second;
        for (int p = 0; p <= m; ++p) {
            // (x + iy)^m: x^(m-p) (iy)^p
            const cplx a = binomial(m, p) * std::pow(cplx(0, 1), p);
            for (int q = 0; q <= n; ++q) {
                const cplx b = binomial(n, q) * std::pow(cplx(0, -1), q);
                acc[{m - p + n - q, p + q}] += c * a * b;
            }
        }
    }
    Poly2 out;
    for (const auto& [key, c] : acc) out.add(key.first, key.second, c.real());
    return out;
}

// Re(alpha (x + iy)^j) (x^2 + y^2)^n as a real polynomial.
Poly2 character_poly(cplx alpha, int j, int n) {
    ZW zw;
    if (j == 0) {
        zw[{n, n}] = alpha.real();
    } else {
        zw[{j + n, n}] = alpha / 2.0;
        zw[{n, j + n}] = std::conj(alpha) / 2.0;
    }
    return zw_real_part(zw);
}

cplx zw_coeff(const ZW& zw, int m, int n) {
    auto it = zw.find({m, n});
    return it == zw.end() ? cplx(0, 0) : it->second;
}

}  // namespace

// ─── Poly2 ───────────────────────────────────────────────────────────────────

Poly2::Poly2(std::map<Key, double> coeffs) {
    for (const auto& [k, c] : coeffs) add(k.first, k.second, c);
}

double Poly2::coeff(int i, int j) const {
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? 0.0 : it->second;
}

void Poly2::add(int i, int j, double c) {
    if (c == 0.0) return;
    auto& slot = coeffs_[{i, j}];
    slot += c;
    if (slot == 0.0) coeffs_.erase({i, j});
}

double Poly2::eval(double x, double y) const {
    double s = 0;
    for (const auto& [k, c] : coeffs_) s += c * std::pow(x, k.first) * std::pow(y, k.second);
    return s;
}

int Poly2::degree() const {
    int d = -1;
    for (const auto& [k, c] : coeffs_) d = std::max(d, k.first + k.second);
    return d;
}

bool Poly2::is_homogeneous(int k) const {
    for (const auto& [key, c] : coeffs_)
        if (key.first + key.second != k) return false;
    return true;
}

Poly2 Poly2::homogeneous_part(int k) const {
    Poly2 out;
    for (const auto& [key, c] : coeffs_)
        if (key.first + key.second == k) out.add(key.first, key.second, c);
    return out;
}

Poly2 Poly2::rotated(double angle) const {
    Poly2 xr, yr;
    xr.add(1, 0, std::cos(angle));
    xr.add(0, 1, -std::sin(angle));
    yr.add(1, 0, std::sin(angle));
    yr.add(0, 1, std::cos(angle));
    Poly2 out;
    for (const auto& [key, c] : coeffs_) {
        Poly2 term;
        term.add(0, 0, c);
        for (int a = 0; a < key.first; ++a) term = term * xr;
        for (int b = 0; b < key.second; ++b) term = term * yr;
        out = out + term;
    }
    return out;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 out = *this;
    for (const auto& [k, c] : o.coeffs_) out.add(k.first, k.second, c);
    return out;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * -1.0; }

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 out;
    for (const auto& [k1, c1] : coeffs_)
        for (const auto& [k2, c2] : o.coeffs_) out.add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
    return out;
}

Poly2 Poly2::operator*(double s) const {
    Poly2 out;
    for (const auto& [k, c] : coeffs_) out.add(k.first, k.second, c * s);
    return out;
}

double Poly2::max_abs() const {
    double m = 0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

BetaJet BetaJet::from_poly(const Poly2& p) {
    for (const auto& [k, c] : p.terms()) {
        if (k.first < 0 || k.second < 0 || k.first + k.second > kMaxBetaDegree)
            throw Error("beta term x^" + std::to_string(k.first) + " y^" + std::to_string(k.second) +
                        " exceeds the degree bound " + std::to_string(kMaxBetaDegree));
    }
    return BetaJet{p};
}

// ─── Invariants ──────────────────────────────────────────────────────────────

double Invariants::theta1() const { return arg_or_zero(r1); }
double Invariants::theta2() const { return arg_or_zero(r2); }
double Invariants::theta3() const { return arg_or_zero(cplx(0, 1) * r3); }

void Invariants::derive_p_coefficients() {
    // P(phi) = -7 d44 cos2phi + 7 b44 cos4phi - 7 c44 sin2phi + 7 a44 sin4phi + |r1|^2 sin(2 phi - 2 theta1),
    // and sin(2phi - 2theta1) = sin2phi cos2theta1 - cos2phi sin2theta1.
    const double r1sq = std::norm(r1);
    const double t1 = theta1();
    A = -7 * beta4.d44 - r1sq * std::sin(2 * t1);
    B = -7 * beta4.c44 + r1sq * std::cos(2 * t1);
    C = 7 * beta4.b44;
    D = 7 * beta4.a44;
    nu = cplx(A, -B) / 2.0;
    mu = cplx(C, -D) / 2.0;
}

Invariants Invariants::from_parameters(double b0, double abs_r1, double theta1, double abs_r2,
                                       double theta2, double abs_r3, double theta3, double tau0,
                                       double v1, double v2, const Beta4Coefficients& b4) {
    Invariants inv;
    inv.b0 = b0;
    inv.r1 = std::polar(abs_r1, theta1);
    inv.r2 = std::polar(abs_r2, theta2);
    inv.r3 = abs_r3 * cplx(std::sin(theta3), -std::cos(theta3));
    inv.tau0 = tau0;
    inv.v = cplx(-v1, v2);
    inv.beta4 = b4;
    inv.derive_p_coefficients();
    return inv;
}

std::map<int, Poly2> isotypic_decompose(const Poly2& p) {
    const int k = std::max(p.degree(), 0);
    if (!p.is_homogeneous(k)) throw Error("mixed degrees");
    if (k > kMaxBetaDegree + 2) throw Error("degree " + std::to_string(k) + " above supported bound");
    const ZW zw = poly_to_zw(p);
    std::map<int, ZW> by_char;
    for (const auto& [key, c] : zw) by_char[std::abs(key.first - key.second)][key] += c;
    std::map<int, Poly2> out;
    // Characters absent from p are omitted; rounding residue counts as absent.
    const double floor = 1e-14 * p.max_abs();
    for (int j = k % 2; j <= k; j += 2) {
        Poly2 comp = zw_real_part(by_char[j]);
        if (comp.max_abs() > floor) out[j] = std::move(comp);
    }
    return out;
}

Invariants extract_invariants(const BetaJet& beta) {
    Invariants inv;
    const Poly2& p = beta.coeffs;
    inv.b0 = p.coeff(0, 0);
    const ZW z1 = poly_to_zw(p.homogeneous_part(1));
    const ZW z2 = poly_to_zw(p.homogeneous_part(2));
    const ZW z3 = poly_to_zw(p.homogeneous_part(3));
    const ZW z4 = poly_to_zw(p.homogeneous_part(4));
    // A character-j piece Re(alpha z^j)(z w)^n has coefficient alpha/2 on z^(j+n) w^n.
    inv.r1 = 2.0 * zw_coeff(z1, 1, 0);
    inv.r2 = 2.0 * zw_coeff(z2, 2, 0);
    inv.tau0 = zw_coeff(z2, 1, 1).real();
    inv.r3 = 2.0 * zw_coeff(z3, 3, 0);
    inv.v = std::conj(2.0 * zw_coeff(z3, 2, 1));
    const cplx alpha4 = 2.0 * zw_coeff(z4, 4, 0);
    const cplx alpha2 = 2.0 * zw_coeff(z4, 3, 1);
    inv.beta4.L44 = zw_coeff(z4, 2, 2).real();
    inv.beta4.a44 = alpha4.real();
    inv.beta4.b44 = -alpha4.imag();
    inv.beta4.c44 = alpha2.real();
    inv.beta4.d44 = alpha2.imag();
    inv.derive_p_coefficients();
    return inv;
}

Poly2 reconstruct_beta(const Invariants& inv) {
    Poly2 out;
    out.add(0, 0, inv.b0);
    out = out + character_poly(inv.r1, 1, 0);
    out = out + character_poly(inv.r2, 2, 0);
    out = out + character_poly(inv.tau0, 0, 1);
    out = out + character_poly(inv.r3, 3, 0);
    out = out + character_poly(std::conj(inv.v), 1, 1);
    const auto& b4 = inv.beta4;
    out = out + character_poly(b4.L44, 0, 2);
    out = out + character_poly(cplx(b4.a44, -b4.b44), 4, 0);
    out = out + character_poly(cplx(b4.c44, b4.d44), 2, 1);
    return out;
}

// ─── Quadrature ──────────────────────────────────────────────────────────────

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw Error("quadrature_order must be positive");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1;
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        nodes[i] = 0.5 * (1 - z);
        weights[i] = 1.0 / ((1 - z * z) * dp * dp);  // 2/((1-z^2)p'^2) scaled by 1/2
    }
}

// ─── MetricModel ─────────────────────────────────────────────────────────────

MetricModel::MetricModel(BetaJet beta, int quadrature_order)
    : beta_(BetaJet::from_poly(beta.coeffs)), inv_(extract_invariants(beta_)), quadrature_order_(quadrature_order) {
    gauss_legendre_unit(quadrature_order_, nodes_, weights_);
    for (const auto& [k, c] : beta_.coeffs.terms()) {
        b_[k.first][k.second] += c;
        g_[k.first + 2][k.second] += c;
        g_[k.first][k.second + 2] += c;
        g_degree_ = std::max(g_degree_, k.first + k.second + 2);
    }
}

namespace {

// Value and derivatives of sum c[i][j] x^i y^j restricted to total degree k.
template <std::size_t N>
Jet2 homogeneous_jet(const std::array<std::array<double, N>, N>& c, int k, const double* xp, const double* yp) {
    Jet2 out;
    for (int i = 0; i <= k; ++i) {
        const int j = k - i;
        if (i >= static_cast<int>(N) || j >= static_cast<int>(N)) continue;
        const double a = c[i][j];
        if (a == 0.0) continue;
        out.v += a * xp[i] * yp[j];
        if (i >= 1) out.x += a * i * xp[i - 1] * yp[j];
        if (j >= 1) out.y += a * j * xp[i] * yp[j - 1];
        if (i >= 2) out.xx += a * i * (i - 1) * xp[i - 2] * yp[j];
        if (i >= 1 && j >= 1) out.xy += a * i * j * xp[i - 1] * yp[j - 1];
        if (j >= 2) out.yy += a * j * (j - 1) * xp[i] * yp[j - 2];
    }
    return out;
}

}  // namespace

Jet2 MetricModel::beta_jet(double x, double y) const {
    double xp[kMaxBetaDegree + 3], yp[kMaxBetaDegree + 3];
    xp[0] = yp[0] = 1;
    for (int i = 1; i < kMaxBetaDegree + 3; ++i) {
        xp[i] = xp[i - 1] * x;
        yp[i] = yp[i - 1] * y;
    }
    Jet2 out;
    for (int k = 0; k <= kMaxBetaDegree; ++k) out = out + homogeneous_jet(b_, k, xp, yp);
    return out;
}

Jet2 MetricModel::gamma_jet(double x, double y) const {
    double xp[kMaxBetaDegree + 3], yp[kMaxBetaDegree + 3];
    xp[0] = yp[0] = 1;
    for (int i = 1; i < kMaxBetaDegree + 3; ++i) {
        xp[i] = xp[i - 1] * x;
        yp[i] = yp[i - 1] * y;
    }
    // g(tx, ty) = sum_k t^k G_k(x, y) with G_k the degree-k part of g = (x^2 + y^2) beta.
    std::array<Jet2, kMaxBetaDegree + 3> G{};
    for (int k = 2; k <= g_degree_; ++k) G[k] = homogeneous_jet(g_, k, xp, yp);

    Jet2 integral;
    for (std::size_t q = 0; q < nodes_.size(); ++q) {
        const double t = nodes_[q];
        Jet2 D;
        // Horner in t: the loop yields sum G_k t^(k-1), one more factor t completes it.
        for (int k = g_degree_; k >= 2; --k) D = (D + G[k]) * t;
        D = D * t + 1.0;
        if (!(D.v > 0)) throw Error("outside normal-form domain");
        const double inv = 1.0 / D.v, inv2 = inv * inv, inv3 = inv2 * inv;
        const double s = 2 * t * weights_[q];
        integral.v += s * inv;
        integral.x += -s * D.x * inv2;
        integral.y += -s * D.y * inv2;
        integral.xx += s * (2 * D.x * D.x * inv3 - D.xx * inv2);
        integral.xy += s * (2 * D.x * D.y * inv3 - D.xy * inv2);
        integral.yy += s * (2 * D.y * D.y * inv3 - D.yy * inv2);
    }
    Jet2 one_plus_g = Jet2::constant(1.0);
    for (int k = 2; k <= g_degree_; ++k) one_plus_g = one_plus_g + G[k];
    if (!(one_plus_g.v > 0)) throw Error("outside normal-form domain");
    return one_plus_g * integral;
}

GammaValue MetricModel::eval_gamma(double x, double y) const {
    const Jet2 j = gamma_jet(x, y);
    return {j.v, j.x, j.y};
}

FrameJet MetricModel::frame_jet(double x, double y) const {
    const Jet2 X = Jet2::var_x(x), Y = Jet2::var_y(y);
    const Jet2 b = beta_jet(x, y);
    const Jet2 g = gamma_jet(x, y);
    FrameJet fj;
    fj.F[0] = Y * Y * b + 1.0;
    fj.F[1] = -(X * Y * b);
    fj.F[2] = Y * g * 0.5;
    fj.G[0] = fj.F[1];
    fj.G[1] = X * X * b + 1.0;
    fj.G[2] = -(X * g) * 0.5;
    return fj;
}

FrameFields MetricModel::frame_fields(double x, double y) const {
    const double b = beta_.coeffs.eval(x, y);
    const double g = eval_gamma(x, y).gamma;
    return {{1 + y * y * b, -x * y * b, 0.5 * y * g}, {-x * y * b, 1 + x * x * b, -0.5 * x * g}};
}

MetricModel MetricModel::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed metric JSON: ") + e.what());
    }
    if (!j.contains("beta") || !j["beta"].contains("terms") || !j["beta"]["terms"].is_array())
        throw Error("malformed metric JSON: missing beta.terms");
    Poly2 p;
    for (const auto& t : j["beta"]["terms"]) {
        if (!t.contains("i") || !t.contains("j") || !t.contains("c"))
            throw Error("malformed metric JSON: term needs i, j, c");
        p.add(t["i"].get<int>(), t["j"].get<int>(), t["c"].get<double>());
    }
    const int order = j.value("quadrature_order", 32);
    if (order < 1) throw Error("quadrature_order must be positive");
    return MetricModel(BetaJet::from_poly(p), order);
}

MetricModel MetricModel::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open metric file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string MetricModel::to_json_text() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : beta_.coeffs.terms()) terms.push_back({{"i", k.first}, {"j", k.second}, {"c", c}});
    nlohmann::json j = {{"beta", {{"terms", terms}}}, {"quadrature_order", quadrature_order_}};
    return j.dump(2);
}

}  // namespace didolocus
