#include "hexbend/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hexbend/errors.hpp"

namespace hexbend {

GaussRule gauss_legendre(int order) {
    if (order < 1 || order > 64) throw std::invalid_argument("Gauss-Legendre order must be in [1, 64]");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(order); it != cache.end()) return it->second;

    GaussRule r;
    r.x.resize(order);
    r.w.resize(order);
    for (int i = 0; i < order; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= order; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // map [-1, 1] to [0, 1]
        r.x[i] = 0.5 * (1.0 - z);
        r.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    cache.emplace(order, r);
    return r;
}

std::vector<double> integrate_fixed(int order, int cells, const Box& box, int n, const Integrand& f) {
    const GaussRule g = gauss_legendre(order);
    const double hx = (box.hi.x - box.lo.x) / cells;
    const double hy = (box.hi.y - box.lo.y) / cells;
    std::vector<double> total(n, 0.0), cell(n), val(n);
    for (int ci = 0; ci < cells; ++ci) {
        for (int cj = 0; cj < cells; ++cj) {
            std::fill(cell.begin(), cell.end(), 0.0);
            for (int a = 0; a < order; ++a) {
                const double x = box.lo.x + (ci + g.x[a]) * hx;
                for (int b = 0; b < order; ++b) {
                    const double y = box.lo.y + (cj + g.x[b]) * hy;
                    f({x, y}, val.data());
                    const double wt = g.w[a] * g.w[b];
                    for (int k = 0; k < n; ++k) cell[k] += wt * val[k];
                }
            }
            for (int k = 0; k < n; ++k) total[k] += cell[k];
        }
    }
    for (auto& t : total) t *= hx * hy;
    return total;
}

QuadratureResult integrate(const Quadrature& q, const Box& box, int n, const Integrand& f) {
    QuadratureResult res;
    if (box.empty()) {
        res.values.assign(n, 0.0);
        return res;
    }
    // Absolute-value integrals give each component a scale that stays
    // meaningful when the signed integral cancels to zero.
    const int m = 2 * n;
    Integrand both = [&](const Vec2& x, double* out) {
        f(x, out);
        for (int k = 0; k < n; ++k) out[n + k] = std::abs(out[k]);
    };
    int cells = std::max(1, q.initial_cells);
    std::vector<double> prev = integrate_fixed(q.order, cells, box, m, both);
    for (int level = 1; level <= q.max_refinements; ++level) {
        cells *= 2;
        std::vector<double> cur = integrate_fixed(q.order, cells, box, m, both);
        bool ok = true;
        for (int k = 0; k < n; ++k) {
            const double scale = std::max(cur[n + k], std::abs(cur[k]));
            if (std::abs(cur[k] - prev[k]) > q.tolerance * scale) ok = false;
        }
        prev = std::move(cur);
        if (ok) {
            res.values.assign(prev.begin(), prev.begin() + n);
            res.cells_per_side = cells;
            res.refinements = level;
            return res;
        }
    }
    throw QuadratureNotConverged("no convergence to relative " + std::to_string(q.tolerance) + " after " +
                                 std::to_string(q.max_refinements) + " refinements (" + std::to_string(cells) +
                                 " cells per side)");
}

void integrate_triangle(const TriangleVerts& t, int order, int n,
                        const std::function<void(const Vec2&, const std::array<double, 3>&, double*)>& f,
                        double* result) {
    const GaussRule g = gauss_legendre(order);
    const Vec2 e1 = t[1] - t[0];
    const Vec2 e2 = t[2] - t[1];
    const double jac = std::abs(e1.x * e2.y - e1.y * e2.x);
    std::vector<double> val(n);
    std::fill(result, result + n, 0.0);
    for (int a = 0; a < order; ++a) {
        const double u = g.x[a];
        for (int b = 0; b < order; ++b) {
            const double v = g.x[b];
            const Vec2 x = t[0] + u * e1 + (u * v) * e2;
            const std::array<double, 3> bary{1.0 - u, u * (1.0 - v), u * v};
            f(x, bary, val.data());
            const double wt = g.w[a] * g.w[b] * u * jac;
            for (int k = 0; k < n; ++k) result[k] += wt * val[k];
        }
    }
}

}  // namespace hexbend
