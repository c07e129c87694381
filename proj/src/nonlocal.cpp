#include "hexbend/nonlocal.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hexbend/errors.hpp"
#include "hexbend/lattice.hpp"

namespace hexbend {

double third_mixed(const SmoothField& w, const Vec2& x) {
    static const LatticeBasis b = build_basis(1.0);
    return w.third(x).contract(b.p1, b.p2, b.p3);
}

void GridSpec::validate() const {
    if (box.empty()) throw PreconditionViolated("grid box is empty");
    if (nx < 2 || ny < 2) throw PreconditionViolated("grid needs at least 2 cells per side");
}

std::array<std::size_t, 3> GridSpec::triangle_nodes(std::size_t t) const {
    const std::size_t cell = t / 2;
    const int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
    if (t % 2 == 0) return {node(i, j), node(i + 1, j), node(i + 1, j + 1)};
    return {node(i, j), node(i + 1, j + 1), node(i, j + 1)};
}

std::array<Vec2, 3> GridSpec::triangle(std::size_t t) const {
    const std::size_t cell = t / 2;
    const int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
    if (t % 2 == 0) return {point(i, j), point(i + 1, j), point(i + 1, j + 1)};
    return {point(i, j), point(i + 1, j + 1), point(i, j + 1)};
}

namespace {

/// Hat-function gradients on a triangle, in triangle_nodes() order.
std::array<Vec2, 3> hat_gradients(const GridSpec& g, std::size_t t) {
    const double ix = 1.0 / g.hx(), iy = 1.0 / g.hy();
    if (t % 2 == 0) return {Vec2{-ix, 0.0}, Vec2{ix, -iy}, Vec2{0.0, iy}};
    return {Vec2{0.0, -iy}, Vec2{ix, 0.0}, Vec2{-ix, iy}};
}

/// Interior-node numbering and the 5-point stiffness operator.
struct InteriorSystem {
    const GridSpec& g;
    int mx, my;
    double cx, cy;

    explicit InteriorSystem(const GridSpec& grid)
        : g(grid), mx(grid.nx - 1), my(grid.ny - 1), cx(grid.hy() / grid.hx()), cy(grid.hx() / grid.hy()) {}

    std::size_t size() const { return static_cast<std::size_t>(mx) * static_cast<std::size_t>(my); }

    void apply(std::span<const double> u, std::span<double> y) const {
        const double d = 2.0 * (cx + cy);
        for (int j = 0; j < my; ++j) {
            const std::size_t row = static_cast<std::size_t>(j) * mx;
            for (int i = 0; i < mx; ++i) {
                const std::size_t k = row + i;
                double s = d * u[k];
                if (i > 0) s -= cx * u[k - 1];
                if (i + 1 < mx) s -= cx * u[k + 1];
                if (j > 0) s -= cy * u[k - mx];
                if (j + 1 < my) s -= cy * u[k + mx];
                y[k] = s;
            }
        }
    }

    /// Restricts a full nodal load to the interior unknowns.
    std::vector<double> restrict_load(const std::vector<double>& full) const {
        std::vector<double> b(size());
        for (int j = 0; j < my; ++j) {
            for (int i = 0; i < mx; ++i) b[static_cast<std::size_t>(j) * mx + i] = full[g.node(i + 1, j + 1)];
        }
        return b;
    }

    GridField expand(const std::vector<double>& u) const {
        GridField f{g, std::vector<double>(g.nodes(), 0.0)};
        for (int j = 0; j < my; ++j) {
            for (int i = 0; i < mx; ++i) f.values[g.node(i + 1, j + 1)] = u[static_cast<std::size_t>(j) * mx + i];
        }
        return f;
    }

    std::pair<GridField, CgReport> solve(const std::vector<double>& full_load, const CgOptions& opt) const {
        const std::vector<double> b = restrict_load(full_load);
        std::vector<double> u(size(), 0.0);
        const std::vector<double> diag(size(), 2.0 * (cx + cy));
        const CgReport rep = conjugate_gradient([this](std::span<const double> x, std::span<double> y) { apply(x, y); },
                                                diag, b, u, opt);
        return {expand(u), rep};
    }
};

bool overlaps(const std::array<Vec2, 3>& t, const Box& b) {
    double lx = t[0].x, hx = t[0].x, ly = t[0].y, hy = t[0].y;
    for (const auto& p : t) {
        lx = std::min(lx, p.x);
        hx = std::max(hx, p.x);
        ly = std::min(ly, p.y);
        hy = std::max(hy, p.y);
    }
    return !(hx < b.lo.x || lx > b.hi.x || hy < b.lo.y || ly > b.hi.y);
}

}  // namespace

double GridField::value(const Vec2& x) const {
    const double u = (x.x - spec.box.lo.x) / spec.hx();
    const double v = (x.y - spec.box.lo.y) / spec.hy();
    if (!(u >= 0.0 && v >= 0.0 && u <= spec.nx && v <= spec.ny)) return 0.0;
    const int i = std::min(static_cast<int>(u), spec.nx - 1);
    const int j = std::min(static_cast<int>(v), spec.ny - 1);
    const double fx = u - i, fy = v - j;
    const double a = values[spec.node(i, j)], b = values[spec.node(i + 1, j)];
    const double c = values[spec.node(i + 1, j + 1)], d = values[spec.node(i, j + 1)];
    if (fx >= fy) return a + fx * (b - a) + fy * (c - b);
    return a + fy * (d - a) + fx * (c - d);
}

Vec2 GridField::gradient(std::size_t t) const {
    const auto n = spec.triangle_nodes(t);
    const auto g = hat_gradients(spec, t);
    Vec2 r;
    for (int k = 0; k < 3; ++k) r += values[n[k]] * g[k];
    return r;
}

double GridField::dirichlet_energy() const {
    double s = 0.0;
    for (std::size_t t = 0; t < spec.triangles(); ++t) {
        const Vec2 g = gradient(t);
        s += dot(g, g);
    }
    return s * spec.triangle_area();
}

void write_grid_csv(std::ostream& out, const GridField& f) {
    out << "x,y,value\n";
    char buf[96];
    for (int j = 0; j <= f.spec.ny; ++j) {
        for (int i = 0; i <= f.spec.nx; ++i) {
            const Vec2 p = f.spec.point(i, j);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.x, p.y, f.values[f.spec.node(i, j)]);
            out << buf;
        }
    }
}

PoissonReport solve_poisson(const GridSpec& grid, const std::function<double(const Vec2&)>& f, const CgOptions& opt) {
    grid.validate();
    std::vector<double> load(grid.nodes(), 0.0);
    double tri[3];
    for (std::size_t t = 0; t < grid.triangles(); ++t) {
        integrate_triangle(grid.triangle(t), 6, 3,
                           [&](const Vec2& x, const std::array<double, 3>& bary, double* out) {
                               const double fx = f(x);
                               for (int k = 0; k < 3; ++k) out[k] = fx * bary[k];
                           },
                           tri);
        const auto n = grid.triangle_nodes(t);
        for (int k = 0; k < 3; ++k) load[n[k]] += tri[k];
    }
    auto [sol, rep] = InteriorSystem(grid).solve(load, opt);
    return {std::move(sol), rep};
}

std::vector<Vec2> cross_vector_integrals(const SmoothField& w, const GridSpec& grid, int order) {
    const Box sup = w.support();
    std::vector<Vec2> V(grid.triangles());
    if (sup.empty()) return V;
    double r[2];
    for (std::size_t t = 0; t < grid.triangles(); ++t) {
        const auto tri = grid.triangle(t);
        if (!overlaps(tri, sup)) continue;
        integrate_triangle(tri, order, 2,
                           [&](const Vec2& x, const std::array<double, 3>&, double* out) {
                               const Vec2 v = cross_vector(w.hessian(x));
                               out[0] = v.x;
                               out[1] = v.y;
                           },
                           r);
        V[t] = {r[0], r[1]};
    }
    return V;
}

GammaSolution solve_gamma(const SmoothField& w, const GridSpec& grid, const CgOptions& opt) {
    grid.validate();
    std::vector<Vec2> V = cross_vector_integrals(w, grid);
    // Weak form: integral grad(gamma).grad(phi) = -(1/6) integral v.grad(phi).
    std::vector<double> load(grid.nodes(), 0.0);
    for (std::size_t t = 0; t < grid.triangles(); ++t) {
        if (V[t].x == 0.0 && V[t].y == 0.0) continue;
        const auto n = grid.triangle_nodes(t);
        const auto g = hat_gradients(grid, t);
        for (int k = 0; k < 3; ++k) load[n[k]] -= dot(V[t], g[k]) / 6.0;
    }
    auto [sol, rep] = InteriorSystem(grid).solve(load, opt);
    return {std::move(sol), std::move(V), rep};
}

UzTerms Uz00_grid(double local_part, const std::vector<Vec2>& V, const GridField& gamma, const MaterialParams& mat) {
    if (V.size() != gamma.spec.triangles()) throw DimensionMismatch("Uz00_grid: one integral per triangle expected");
    mat.validate();
    const double s3 = std::sqrt(3.0);
    double cross = 0.0;
    for (std::size_t t = 0; t < V.size(); ++t) cross += dot(V[t], gamma.gradient(t));
    UzTerms r;
    r.local = local_part;
    r.cross = s3 * mat.kZ * cross;
    r.quad = 3.0 * s3 * mat.kZ * gamma.dirichlet_energy();
    return r;
}

NonlocalEnergy nonlocal_energy(const SmoothField& w, const MaterialParams& mat, const GridSpec& grid,
                               const Quadrature& q, const CgOptions& opt) {
    NonlocalEnergy e;
    e.solution = solve_gamma(w, grid, opt);
    const double local = Uz00_terms(w, *make_zero_field(), mat, q).local;
    e.terms = Uz00_grid(local, e.solution.V, e.solution.gamma, mat);
    return e;
}

}  // namespace hexbend
