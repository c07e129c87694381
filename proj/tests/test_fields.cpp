#include <doctest.h>

#include <cmath>

#include "hexbend/fields.hpp"

using namespace hexbend;

TEST_SUITE("fields") {

TEST_CASE("polynomial arithmetic and derivatives") {
    const Poly2 p = Poly2::from_terms({{2, 1, 3.0}, {0, 0, -1.0}, {1, 0, 0.5}});
    const Vec2 t{0.3, -0.7};
    CHECK(p(t) == doctest::Approx(3.0 * 0.09 * -0.7 - 1.0 + 0.15));
    CHECK(p.dx()(t) == doctest::Approx(6.0 * 0.3 * -0.7 + 0.5));
    CHECK(p.dy()(t) == doctest::Approx(3.0 * 0.09));
    CHECK(p.pow(3)(t) == doctest::Approx(std::pow(p(t), 3)));
    CHECK((p * p - p.pow(2))(t) == doctest::Approx(0.0));
    CHECK(p.rescaled(2.0)(t) == doctest::Approx(p(Vec2{2.0 * t.x, 2.0 * t.y})));
    CHECK(Poly2::unit_disc_weight()(t) == doctest::Approx(1.0 - 0.09 - 0.49));
}

TEST_CASE("analytic derivatives agree with finite differences") {
    const Poly2 q = Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.8}, {1, 1, -1.5}});
    const FieldPtr fields[] = {
        make_bump_poly({0.1, -0.05}, 0.5, q),
        make_poly_disc({0.0, 0.1}, 0.6, Poly2::unit_disc_weight().pow(5) * q),
        make_quadratic({1.0, -0.5, 2.0}, {0.3, 0.1}, 4.0),
        make_manufactured_pair({0.0, 0.0}, 0.4, 10, 1.0, q).w,
        make_manufactured_pair({0.0, 0.0}, 0.4, 10, 1.0, q).gamma,
    };
    const Vec2 pts[] = {{0.05, 0.02}, {-0.2, 0.13}, {0.3, -0.1}};
    for (const auto& f : fields) {
        for (const auto& x : pts) CHECK(finite_difference_check(*f, x, 1e-5) < 1e-6);
    }
}

TEST_CASE("bump is C-infinity flat at the rim and zero outside") {
    const FieldPtr f = make_bump_poly({0.0, 0.0}, 0.5, Poly2::constant(1.0));
    CHECK(f->value({0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(f->value({0.6, 0.0}) == 0.0);
    CHECK(std::abs(f->hessian({0.4999, 0.0}).xx) < 1e-100);
    const Box s = f->support();
    CHECK(s.lo.x == doctest::Approx(-0.5));
    CHECK(s.hi.y == doctest::Approx(0.5));
}

TEST_CASE("manufactured gamma solves the Poisson problem pointwise and vanishes on the rim") {
    const Poly2 q = Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.5}, {0, 2, -0.7}});
    const ManufacturedPair mp = make_manufactured_pair({0.1, 0.0}, 0.4, 8, 2.0, q);
    for (const Vec2& x : {Vec2{0.1, 0.0}, Vec2{0.25, -0.1}, Vec2{-0.1, 0.2}}) {
        const Sym3 t = mp.w->third(x);
        const double rhs = (3.0 * t.xxy - t.yyy) / 6.0;
        const Sym2 h = mp.gamma->hessian(x);
        CHECK(-(h.xx + h.yy) == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
    }
    CHECK(std::abs(mp.gamma->value({0.5, 0.0})) < 1e-15);
    CHECK(mp.gamma->value({0.1 + 0.4 * std::cos(1.0), 0.4 * std::sin(1.0)}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("the Poisson source equals minus two thirds of the third derivative along the three bonds") {
    const double s3 = std::sqrt(3.0);
    const Vec2 p1{s3 / 2, -0.5}, p2{0.0, 1.0}, p3{-s3 / 2, -0.5};
    const ManufacturedPair mp = make_manufactured_pair({0.0, 0.0}, 0.4, 8, 1.0, Poly2::constant(1.0));
    const Vec2 x{0.07, -0.11};
    const Sym3 t = mp.w->third(x);
    CHECK(-2.0 / 3.0 * t.contract(p1, p2, p3) == doctest::Approx((3.0 * t.xxy - t.yyy) / 6.0).epsilon(1e-12));
}

TEST_CASE("the zero field") {
    const FieldPtr z = make_zero_field();
    CHECK(z->value({1.0, 2.0}) == 0.0);
    CHECK(z->support().empty());
}

}
