#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "hexbend/cg.hpp"
#include "hexbend/continuum.hpp"
#include "hexbend/fields.hpp"

namespace hexbend {

/// third(x) contracted with the unit bonds p1, p2, p3.
double third_mixed(const SmoothField& w, const Vec2& x);

/// Uniform grid of nx-by-ny cells over a rectangle.  Each cell is split along
/// its (i,j)-(i+1,j+1) diagonal into two triangles carrying linear elements, so
/// the stiffness matrix is the 5-point Laplacian.
struct GridSpec {
    Box box;
    int nx = 0;
    int ny = 0;

    double hx() const { return (box.hi.x - box.lo.x) / nx; }
    double hy() const { return (box.hi.y - box.lo.y) / ny; }
    std::size_t nodes() const { return static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1); }
    std::size_t node(int i, int j) const { return static_cast<std::size_t>(j) * (nx + 1) + i; }
    Vec2 point(int i, int j) const { return {box.lo.x + i * hx(), box.lo.y + j * hy()}; }
    std::size_t triangles() const { return 2 * static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    /// Triangle t = 2*(j*nx + i) + s: s = 0 below the diagonal, s = 1 above.
    std::array<std::size_t, 3> triangle_nodes(std::size_t t) const;
    std::array<Vec2, 3> triangle(std::size_t t) const;
    double triangle_area() const { return 0.5 * hx() * hy(); }

    /// Throws PreconditionViolated for empty boxes or fewer than 2 cells per side.
    void validate() const;
};

/// Nodal values of a continuous piecewise-linear field; the boundary ring is 0.
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    double value(const Vec2& x) const;
    /// Constant gradient on triangle t.
    Vec2 gradient(std::size_t t) const;
    /// Integral of |grad|^2 over the grid.
    double dirichlet_energy() const;
};

/// Grid points "x,y,value" with a header row.
void write_grid_csv(std::ostream& out, const GridField& f);

struct PoissonReport {
    GridField solution;
    CgReport cg;
};

/// -Lap u = f with u = 0 on the rectangle boundary; load integrated exactly
/// against the hat functions by triangle quadrature.
PoissonReport solve_poisson(const GridSpec& grid, const std::function<double(const Vec2&)>& f,
                            const CgOptions& opt = {});

/// Integrals of v = (2 w_12, w_11 - w_22) over every triangle (zero where the
/// triangle misses the support of w).
std::vector<Vec2> cross_vector_integrals(const SmoothField& w, const GridSpec& grid, int order = 6);

struct GammaSolution {
    GridField gamma;
    std::vector<Vec2> V;  // per-triangle integrals of v
    CgReport cg;
};

/// Discrete minimiser over the linear-element space of the Z-limit in gamma:
/// the weak form of -Lap gamma = -(2/3) d_{p1 p2 p3} w with zero boundary data.
GammaSolution solve_gamma(const SmoothField& w, const GridSpec& grid, const CgOptions& opt = {});

/// Cartesian Z-limit for a piecewise-linear gamma, with the local part
/// supplied (it depends on w only).  Cross and quadratic terms are exact
/// for the element field.
UzTerms Uz00_grid(double local_part, const std::vector<Vec2>& V, const GridField& gamma, const MaterialParams& mat);

struct NonlocalEnergy {
    UzTerms terms;
    GammaSolution solution;
    double value() const { return terms.total(); }
};

/// Minimised Z-limit energy: Uz00(w, gamma_h) with gamma_h from solve_gamma.
NonlocalEnergy nonlocal_energy(const SmoothField& w, const MaterialParams& mat, const GridSpec& grid,
                               const Quadrature& q, const CgOptions& opt = {});

}  // namespace hexbend
