#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hexbend/geometry.hpp"

namespace hexbend {

/// Composite tensor Gauss-Legendre rule over a box, refined by halving the
/// cell size until every component changes by less than `tolerance` relative
/// to its absolute integral.
struct Quadrature {
    int order = 5;
    int initial_cells = 8;
    int max_refinements = 7;
    double tolerance = 1e-9;
};

/// Writes n integrand components at x into out[0..n).
using Integrand = std::function<void(const Vec2& x, double* out)>;

struct QuadratureResult {
    std::vector<double> values;
    int cells_per_side = 0;
    int refinements = 0;
};

/// Throws QuadratureNotConverged.
QuadratureResult integrate(const Quadrature& q, const Box& box, int n, const Integrand& f);

/// Single fixed-resolution pass (no refinement).
std::vector<double> integrate_fixed(int order, int cells_per_side, const Box& box, int n, const Integrand& f);

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
GaussRule gauss_legendre(int order);

using TriangleVerts = std::array<Vec2, 3>;

/// Collapsed-square Gauss rule on a triangle: integrates polynomials of
/// degree <= 2*order - 2 exactly.  f receives the point and its barycentric
/// coordinates.
void integrate_triangle(const TriangleVerts& t, int order, int n,
                        const std::function<void(const Vec2& x, const std::array<double, 3>& bary, double* out)>& f,
                        double* result);

}  // namespace hexbend
