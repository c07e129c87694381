#include <doctest.h>

#include <cmath>

#include "hexbend/errors.hpp"
#include "hexbend/quadrature.hpp"

using namespace hexbend;

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre on [0,1] integrates monomials up to degree 2n-1") {
    for (int n : {1, 3, 5, 8}) {
        const GaussRule r = gauss_legendre(n);
        REQUIRE(r.x.size() == static_cast<std::size_t>(n));
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += r.w[k] * std::pow(r.x[k], d);
            CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("box integration of a polynomial is exact") {
    const Quadrature q;
    const auto r = integrate(q, {{0.0, -1.0}, {2.0, 1.0}}, 2, [](const Vec2& x, double* out) {
        out[0] = x.x * x.x * x.y * x.y;
        out[1] = 1.0;
    });
    CHECK(r.values[0] == doctest::Approx(8.0 / 3.0 * 2.0 / 3.0).epsilon(1e-13));
    CHECK(r.values[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration of the standard bump against a radial Simpson rule") {
    auto bump = [](double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; };
    const int n = 200000;
    double simpson = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double r = static_cast<double>(k) / n;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        simpson += w * r * bump(r * r);
    }
    simpson *= 2.0 * M_PI / (3.0 * n);
    const auto r = integrate(Quadrature{}, {{-1.0, -1.0}, {1.0, 1.0}}, 1,
                             [&](const Vec2& x, double* out) { out[0] = bump(x.x * x.x + x.y * x.y); });
    CHECK(r.values[0] == doctest::Approx(simpson).epsilon(1e-8));
}

TEST_CASE("triangle rule: polynomial moments and barycentric weights") {
    const TriangleVerts t{Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    double r[4];
    integrate_triangle(t, 4, 4,
                       [](const Vec2& x, const std::array<double, 3>& b, double* out) {
                           out[0] = x.x * x.x;
                           out[1] = b[0];
                           out[2] = b[1] * b[2];
                           out[3] = x.x * x.y * x.y;
                       },
                       r);
    CHECK(r[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(r[2] == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    CHECK(r[3] == doctest::Approx(1.0 / 60.0).epsilon(1e-14));
}

TEST_CASE("unreachable tolerance is reported") {
    Quadrature q;
    q.max_refinements = 0;
    q.tolerance = 1e-15;
    CHECK_THROWS_AS(integrate(q, {{-1.0, -1.0}, {1.0, 1.0}}, 1,
                              [](const Vec2& x, double* out) {
                                  const double r2 = x.x * x.x + x.y * x.y;
                                  out[0] = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
                              }),
                    QuadratureNotConverged);
}

}
