#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "hexbend/geometry.hpp"

namespace hexbend {

/// Value with derivatives up to third order at one point.
struct Jet3 {
    double v = 0.0;
    Vec2 g;
    Sym2 h;
    Sym3 t;
};

Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator*(double s, const Jet3& a);

/// Smooth scalar field with hand-coded derivatives.  Fields used in the limit
/// functionals vanish, with all derivatives, outside support().
class SmoothField {
public:
    virtual ~SmoothField() = default;

    virtual Jet3 jet(const Vec2& x) const = 0;
    virtual double value(const Vec2& x) const { return jet(x).v; }
    virtual Vec2 gradient(const Vec2& x) const { return jet(x).g; }
    virtual Sym2 hessian(const Vec2& x) const { return jet(x).h; }
    virtual Sym3 third(const Vec2& x) const { return jet(x).t; }

    /// Closed box outside which the field vanishes identically.
    virtual Box support() const = 0;
    virtual std::string describe() const = 0;
};

using FieldPtr = std::shared_ptr<const SmoothField>;

/// Dense bivariate polynomial sum c[i][j] t1^i t2^j.
class Poly2 {
public:
    Poly2() = default;
    explicit Poly2(int degree);

    static Poly2 constant(double c);
    /// 1 - t1^2 - t2^2
    static Poly2 unit_disc_weight();
    /// Polynomial from (i, j, coefficient) monomials.
    static Poly2 from_terms(const std::vector<std::array<double, 3>>& terms);

    int degree() const { return deg_; }
    double coef(int i, int j) const;
    void set(int i, int j, double c);

    double operator()(const Vec2& t) const;
    Poly2 dx() const;
    Poly2 dy() const;
    /// Same polynomial in t = s * u (i.e. p(s u1, s u2)).
    Poly2 rescaled(double s) const;
    Poly2 pow(int k) const;

    friend Poly2 operator+(const Poly2& a, const Poly2& b);
    friend Poly2 operator-(const Poly2& a, const Poly2& b);
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    friend Poly2 operator*(double s, const Poly2& a);

private:
    int deg_ = -1;
    std::vector<double> c_;  // (deg+1)^2, index i*(deg+1)+j
};

/// q(x - c) * exp(1 - 1/(1 - |x - c|^2 / R^2)) inside the disc |x - c| < R.
FieldPtr make_bump_poly(Vec2 center, double radius, const Poly2& q);

/// Polynomial P((x - c)/R) inside the disc |x - c| < R, zero outside.  P must
/// vanish to sufficient order on the unit circle for the derivatives in use
/// to be continuous.
FieldPtr make_poly_disc(Vec2 center, double radius, const Poly2& p_scaled);

/// 1/2 x.Hx + g.x + c on the whole plane (not compactly supported).
FieldPtr make_quadratic(const Sym2& H, Vec2 g = {}, double c = 0.0);

FieldPtr make_zero_field();

/// Exact non-local pair built from a potential psi = amp * q(x - c) * (1 - |x-c|^2/R^2)^k:
/// w = Laplacian(psi) and gamma = -(1/6)(3 psi_112 - psi_222), which solves
/// -Laplacian(gamma) = (1/6)(3 w_112 - w_222) with compact support.
struct ManufacturedPair {
    FieldPtr w;
    FieldPtr gamma;
};
ManufacturedPair make_manufactured_pair(Vec2 center, double radius, int k, double amp, const Poly2& q);

/// Largest relative disagreement between the callbacks and centred finite
/// differences of the next lower derivative, at point x with step h.
double finite_difference_check(const SmoothField& f, const Vec2& x, double h);

}  // namespace hexbend
