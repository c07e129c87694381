#include "hexbend/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hexbend {

namespace {

double gc(const Vec2& g, int a) { return a == 0 ? g.x : g.y; }

double hc(const Sym2& h, int a, int b) {
    switch (a + b) {
        case 0: return h.xx;
        case 1: return h.xy;
        default: return h.yy;
    }
}

double tc(const Sym3& t, int a, int b, int c) {
    switch (a + b + c) {
        case 0: return t.xxx;
        case 1: return t.xxy;
        case 2: return t.xyy;
        default: return t.yyy;
    }
}

constexpr int kHessIdx[3][2] = {{0, 0}, {0, 1}, {1, 1}};
constexpr int kThirdIdx[4][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};

void set_h(Sym2& h, int n, double v) {
    (n == 0 ? h.xx : n == 1 ? h.xy : h.yy) = v;
}

void set_t(Sym3& t, int n, double v) {
    (n == 0 ? t.xxx : n == 1 ? t.xxy : n == 2 ? t.xyy : t.yyy) = v;
}

}  // namespace

Jet3 operator*(const Jet3& f, const Jet3& g) {
    Jet3 r;
    r.v = f.v * g.v;
    r.g = {f.g.x * g.v + f.v * g.g.x, f.g.y * g.v + f.v * g.g.y};
    for (int n = 0; n < 3; ++n) {
        const int a = kHessIdx[n][0], b = kHessIdx[n][1];
        set_h(r.h, n, hc(f.h, a, b) * g.v + gc(f.g, a) * gc(g.g, b) + gc(f.g, b) * gc(g.g, a) + f.v * hc(g.h, a, b));
    }
    for (int n = 0; n < 4; ++n) {
        const int a = kThirdIdx[n][0], b = kThirdIdx[n][1], c = kThirdIdx[n][2];
        const double v = tc(f.t, a, b, c) * g.v
                       + hc(f.h, a, b) * gc(g.g, c) + hc(f.h, a, c) * gc(g.g, b) + hc(f.h, b, c) * gc(g.g, a)
                       + gc(f.g, a) * hc(g.h, b, c) + gc(f.g, b) * hc(g.h, a, c) + gc(f.g, c) * hc(g.h, a, b)
                       + f.v * tc(g.t, a, b, c);
        set_t(r.t, n, v);
    }
    return r;
}

Jet3 operator+(const Jet3& a, const Jet3& b) { return {a.v + b.v, a.g + b.g, a.h + b.h, a.t + b.t}; }
Jet3 operator*(double s, const Jet3& a) { return {s * a.v, s * a.g, s * a.h, s * a.t}; }

// ---------------------------------------------------------------- Poly2

Poly2::Poly2(int degree) : deg_(degree), c_(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0) {
    if (degree < 0) throw std::invalid_argument("polynomial degree must be non-negative");
}

Poly2 Poly2::constant(double c) {
    Poly2 p(0);
    p.c_[0] = c;
    return p;
}

Poly2 Poly2::unit_disc_weight() {
    Poly2 p(2);
    p.set(0, 0, 1.0);
    p.set(2, 0, -1.0);
    p.set(0, 2, -1.0);
    return p;
}

Poly2 Poly2::from_terms(const std::vector<std::array<double, 3>>& terms) {
    int d = 0;
    for (const auto& t : terms) {
        if (t[0] < 0 || t[1] < 0) throw std::invalid_argument("negative monomial exponent");
        d = std::max(d, static_cast<int>(t[0]) + static_cast<int>(t[1]));
    }
    Poly2 p(d);
    for (const auto& t : terms) {
        const int i = static_cast<int>(t[0]), j = static_cast<int>(t[1]);
        p.set(i, j, p.coef(i, j) + t[2]);
    }
    return p;
}

double Poly2::coef(int i, int j) const {
    if (i < 0 || j < 0 || i > deg_ || j > deg_) return 0.0;
    return c_[static_cast<std::size_t>(i * (deg_ + 1) + j)];
}

void Poly2::set(int i, int j, double c) {
    if (i < 0 || j < 0 || i > deg_ || j > deg_) throw std::out_of_range("monomial outside polynomial degree");
    c_[static_cast<std::size_t>(i * (deg_ + 1) + j)] = c;
}

double Poly2::operator()(const Vec2& t) const {
    double outer = 0.0;
    for (int i = deg_; i >= 0; --i) {
        double inner = 0.0;
        const double* row = c_.data() + i * (deg_ + 1);
        for (int j = deg_ - i; j >= 0; --j) inner = inner * t.y + row[j];
        outer = outer * t.x + inner;
    }
    return outer;
}

Poly2 Poly2::dx() const {
    if (deg_ <= 0) return constant(0.0);
    Poly2 r(deg_ - 1);
    for (int i = 1; i <= deg_; ++i) {
        for (int j = 0; i + j <= deg_; ++j) r.set(i - 1, j, i * coef(i, j));
    }
    return r;
}

Poly2 Poly2::dy() const {
    if (deg_ <= 0) return constant(0.0);
    Poly2 r(deg_ - 1);
    for (int i = 0; i <= deg_; ++i) {
        for (int j = 1; i + j <= deg_; ++j) r.set(i, j - 1, j * coef(i, j));
    }
    return r;
}

Poly2 Poly2::rescaled(double s) const {
    Poly2 r(*this);
    for (int i = 0; i <= deg_; ++i) {
        for (int j = 0; i + j <= deg_; ++j) r.set(i, j, coef(i, j) * std::pow(s, i + j));
    }
    return r;
}

Poly2 Poly2::pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative polynomial power");
    Poly2 r = constant(1.0);
    for (int n = 0; n < k; ++n) r = r * *this;
    return r;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 r(std::max(a.deg_, b.deg_));
    for (int i = 0; i <= r.deg_; ++i) {
        for (int j = 0; i + j <= r.deg_; ++j) r.set(i, j, a.coef(i, j) + b.coef(i, j));
    }
    return r;
}

Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-1.0) * b; }

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r(a.deg_ + b.deg_);
    for (int i = 0; i <= a.deg_; ++i) {
        for (int j = 0; i + j <= a.deg_; ++j) {
            const double ca = a.coef(i, j);
            if (ca == 0.0) continue;
            for (int k = 0; k <= b.deg_; ++k) {
                for (int l = 0; k + l <= b.deg_; ++l) {
                    r.c_[static_cast<std::size_t>((i + k) * (r.deg_ + 1) + j + l)] += ca * b.coef(k, l);
                }
            }
        }
    }
    return r;
}

Poly2 operator*(double s, const Poly2& a) {
    Poly2 r(a);
    for (auto& c : r.c_) c *= s;
    return r;
}

// ---------------------------------------------------------------- fields

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Polynomial together with its derivatives up to third order.
struct PolyJet {
    Poly2 p, px, py, pxx, pxy, pyy, pxxx, pxxy, pxyy, pyyy;

    explicit PolyJet(const Poly2& q) : p(q) {
        px = p.dx();
        py = p.dy();
        pxx = px.dx();
        pxy = px.dy();
        pyy = py.dy();
        pxxx = pxx.dx();
        pxxy = pxx.dy();
        pxyy = pxy.dy();
        pyyy = pyy.dy();
    }

    /// Jet at t of p(t / s); derivatives pick up powers of 1/s.
    Jet3 at(const Vec2& t, double s) const {
        const double i1 = 1.0 / s, i2 = i1 * i1, i3 = i2 * i1;
        Jet3 j;
        j.v = p(t);
        j.g = {i1 * px(t), i1 * py(t)};
        j.h = {i2 * pxx(t), i2 * pxy(t), i2 * pyy(t)};
        j.t = {i3 * pxxx(t), i3 * pxxy(t), i3 * pxyy(t), i3 * pyyy(t)};
        return j;
    }
};

class BumpPolyField final : public SmoothField {
public:
    BumpPolyField(Vec2 c, double r, const Poly2& q) : c_(c), r_(r), q_(q) {
        if (!(r > 0.0)) throw std::invalid_argument("bump radius must be positive");
    }

    Jet3 jet(const Vec2& x) const override {
        const Vec2 y = x - c_;
        const double r2 = r_ * r_;
        const double s = dot(y, y) / r2;
        if (s >= 1.0) return {};
        const double u = 1.0 / (1.0 - s);
        const double g0 = std::exp(1.0 - u);
        const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
        const double g1 = -u2 * g0;
        const double g2 = (u4 - 2.0 * u3) * g0;
        const double g3 = (-u4 * u2 + 6.0 * u4 * u - 6.0 * u4) * g0;
        const double sa[2] = {2.0 * y.x / r2, 2.0 * y.y / r2};
        const double sab = 2.0 / r2;
        Jet3 b;
        b.v = g0;
        b.g = {g1 * sa[0], g1 * sa[1]};
        for (int n = 0; n < 3; ++n) {
            const int a = kHessIdx[n][0], bb = kHessIdx[n][1];
            set_h(b.h, n, g2 * sa[a] * sa[bb] + (a == bb ? g1 * sab : 0.0));
        }
        for (int n = 0; n < 4; ++n) {
            const int a = kThirdIdx[n][0], bb = kThirdIdx[n][1], cc = kThirdIdx[n][2];
            const double mixed = (a == bb ? sab * sa[cc] : 0.0) + (a == cc ? sab * sa[bb] : 0.0) +
                                 (bb == cc ? sab * sa[a] : 0.0);
            set_t(b.t, n, g3 * sa[a] * sa[bb] * sa[cc] + g2 * mixed);
        }
        return q_.at(y, 1.0) * b;
    }

    Box support() const override { return {{c_.x - r_, c_.y - r_}, {c_.x + r_, c_.y + r_}}; }
    std::string describe() const override {
        return "bump_poly(center=(" + fmt(c_.x) + "," + fmt(c_.y) + "), radius=" + fmt(r_) +
               ", degree=" + std::to_string(q_.p.degree()) + ")";
    }

private:
    Vec2 c_;
    double r_;
    PolyJet q_;
};

class PolyDiscField final : public SmoothField {
public:
    PolyDiscField(Vec2 c, double r, const Poly2& p) : c_(c), r_(r), p_(p) {
        if (!(r > 0.0)) throw std::invalid_argument("disc radius must be positive");
    }

    Jet3 jet(const Vec2& x) const override {
        const Vec2 t = (1.0 / r_) * (x - c_);
        if (dot(t, t) >= 1.0) return {};
        return p_.at(t, r_);
    }
    double value(const Vec2& x) const override {
        const Vec2 t = (1.0 / r_) * (x - c_);
        return dot(t, t) >= 1.0 ? 0.0 : p_.p(t);
    }
    Vec2 gradient(const Vec2& x) const override {
        const Vec2 t = (1.0 / r_) * (x - c_);
        if (dot(t, t) >= 1.0) return {};
        return (1.0 / r_) * Vec2{p_.px(t), p_.py(t)};
    }
    Sym2 hessian(const Vec2& x) const override {
        const Vec2 t = (1.0 / r_) * (x - c_);
        if (dot(t, t) >= 1.0) return {};
        return (1.0 / (r_ * r_)) * Sym2{p_.pxx(t), p_.pxy(t), p_.pyy(t)};
    }

    Box support() const override { return {{c_.x - r_, c_.y - r_}, {c_.x + r_, c_.y + r_}}; }
    std::string describe() const override {
        return "poly_disc(center=(" + fmt(c_.x) + "," + fmt(c_.y) + "), radius=" + fmt(r_) +
               ", degree=" + std::to_string(p_.p.degree()) + ")";
    }

private:
    Vec2 c_;
    double r_;
    PolyJet p_;
};

class QuadraticField final : public SmoothField {
public:
    QuadraticField(const Sym2& H, Vec2 g, double c) : H_(H), g_(g), c_(c) {}

    Jet3 jet(const Vec2& x) const override {
        Jet3 j;
        j.v = 0.5 * H_.contract(x, x) + dot(g_, x) + c_;
        j.g = H_.apply(x) + g_;
        j.h = H_;
        return j;
    }
    Box support() const override {
        const double inf = std::numeric_limits<double>::infinity();
        return {{-inf, -inf}, {inf, inf}};
    }
    std::string describe() const override {
        return "quadratic(H=[" + fmt(H_.xx) + "," + fmt(H_.xy) + "," + fmt(H_.yy) + "])";
    }

private:
    Sym2 H_;
    Vec2 g_;
    double c_;
};

class ZeroField final : public SmoothField {
public:
    Jet3 jet(const Vec2&) const override { return {}; }
    Box support() const override { return {}; }
    std::string describe() const override { return "zero"; }
};

}  // namespace

FieldPtr make_bump_poly(Vec2 center, double radius, const Poly2& q) {
    return std::make_shared<BumpPolyField>(center, radius, q);
}

FieldPtr make_poly_disc(Vec2 center, double radius, const Poly2& p_scaled) {
    return std::make_shared<PolyDiscField>(center, radius, p_scaled);
}

FieldPtr make_quadratic(const Sym2& H, Vec2 g, double c) { return std::make_shared<QuadraticField>(H, g, c); }

FieldPtr make_zero_field() { return std::make_shared<ZeroField>(); }

ManufacturedPair make_manufactured_pair(Vec2 center, double radius, int k, double amp, const Poly2& q) {
    if (k < 4) throw std::invalid_argument("weight exponent must be at least 4 for a C3 non-local pair");
    const Poly2 psi = amp * (q.rescaled(radius) * Poly2::unit_disc_weight().pow(k));
    const Poly2 psi_xx = psi.dx().dx(), psi_yy = psi.dy().dy();
    const Poly2 w = (1.0 / (radius * radius)) * (psi_xx + psi_yy);
    const Poly2 gamma = (-1.0 / (6.0 * radius * radius * radius)) * (3.0 * psi_xx.dy() - psi_yy.dy());
    return {make_poly_disc(center, radius, w), make_poly_disc(center, radius, gamma)};
}

double finite_difference_check(const SmoothField& f, const Vec2& x, double h) {
    const Vec2 ex{h, 0.0}, ey{0.0, h};
    const Jet3 j = f.jet(x);
    const Jet3 xp = f.jet(x + ex), xm = f.jet(x - ex), yp = f.jet(x + ey), ym = f.jet(x - ey);
    const double s = 0.5 / h;

    auto rel = [](double fd, double cb, double scale) { return std::abs(fd - cb) / std::max(scale, 1e-300); };
    const double g_scale = std::max(std::abs(j.g.x), std::abs(j.g.y));
    const double h_scale = std::max({std::abs(j.h.xx), std::abs(j.h.xy), std::abs(j.h.yy)});
    const double t_scale = std::max({std::abs(j.t.xxx), std::abs(j.t.xxy), std::abs(j.t.xyy), std::abs(j.t.yyy)});

    double e = 0.0;
    if (g_scale > 0.0) {
        e = std::max(e, rel(s * (xp.v - xm.v), j.g.x, g_scale));
        e = std::max(e, rel(s * (yp.v - ym.v), j.g.y, g_scale));
    }
    if (h_scale > 0.0) {
        e = std::max(e, rel(s * (xp.g.x - xm.g.x), j.h.xx, h_scale));
        e = std::max(e, rel(s * (yp.g.x - ym.g.x), j.h.xy, h_scale));
        e = std::max(e, rel(s * (yp.g.y - ym.g.y), j.h.yy, h_scale));
    }
    if (t_scale > 0.0) {
        e = std::max(e, rel(s * (xp.h.xx - xm.h.xx), j.t.xxx, t_scale));
        e = std::max(e, rel(s * (yp.h.xx - ym.h.xx), j.t.xxy, t_scale));
        e = std::max(e, rel(s * (yp.h.xy - ym.h.xy), j.t.xyy, t_scale));
        e = std::max(e, rel(s * (yp.h.yy - ym.h.yy), j.t.yyy, t_scale));
    }
    return e;
}

}  // namespace hexbend
