#pragma once

#include "hexbend/energy.hpp"
#include "hexbend/fields.hpp"
#include "hexbend/quadrature.hpp"

namespace hexbend {

/// Coefficients of the local limit 1/2 * integral of A (Lap w)^2 - B det(Hess w).
struct ContinuumParams {
    double A = 0.0;
    double B = 0.0;

    static ContinuumParams from(const MaterialParams& mat);
};

/// Throws PreconditionViolated unless sum p_i = 0 and sum p_i (x) p_i = 3/2 I.
void check_direction_algebra();

/// Unit-direction derivatives: d_a f = grad f . a/|a|, d_ab f = a.H b / (|a||b|).
double dir1(const Vec2& grad, const Vec2& a);
double dir2(const Sym2& H, const Vec2& a, const Vec2& b);

/// Integral of (Lap w)^2 and of det(Hess w).
struct LocalIntegrals {
    double lap2 = 0.0;
    double det = 0.0;
};
LocalIntegrals local_integrals(const SmoothField& w, const Quadrature& q);

double U0b(const SmoothField& w, const MaterialParams& mat, const Quadrature& q);

/// Z-dihedral limit in directional form: sum over the six (d_i, p_j) pairs.
double Uz0(const SmoothField& w, const SmoothField& gamma, const MaterialParams& mat, const Quadrature& q);

/// Cartesian form of the Z-dihedral limit, split into its three integrals.
struct UzTerms {
    double local = 0.0;  // depends on w only
    double cross = 0.0;  // bilinear in (w, gamma)
    double quad = 0.0;   // 3 sqrt(3) kZ * integral |grad gamma|^2
    double total() const { return local + cross + quad; }
};
UzTerms Uz00_terms(const SmoothField& w, const SmoothField& gamma, const MaterialParams& mat, const Quadrature& q);
double Uz00(const SmoothField& w, const SmoothField& gamma, const MaterialParams& mat, const Quadrature& q);

double Uc0(const SmoothField& w, const MaterialParams& mat, const Quadrature& q);
double Us0(const SmoothField& w, const MaterialParams& mat, const Quadrature& q);

/// The vector field v = (2 w_12, w_11 - w_22) pairing with grad gamma in the cross term.
inline Vec2 cross_vector(const Sym2& H) { return {2.0 * H.xy, H.xx - H.yy}; }

}  // namespace hexbend
