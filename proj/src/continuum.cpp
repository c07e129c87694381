#include "hexbend/continuum.hpp"

#include <cmath>
#include <mutex>

#include "hexbend/errors.hpp"
#include "hexbend/lattice.hpp"

namespace hexbend {

namespace {

const double kS3 = std::sqrt(3.0);

Box support_of(const SmoothField& a) {
    const Box b = a.support();
    if (!std::isfinite(b.lo.x) || !std::isfinite(b.lo.y) || !std::isfinite(b.hi.x) || !std::isfinite(b.hi.y)) {
        throw PreconditionViolated(a.describe() + " is not compactly supported");
    }
    return b;
}

Box support_of(const SmoothField& a, const SmoothField& b) {
    const Box x = support_of(a), y = support_of(b);
    if (x.empty()) return y;
    if (y.empty()) return x;
    return bounding_union(x, y);
}

const LatticeBasis& unit_basis() {
    static const LatticeBasis b = build_basis(1.0);
    return b;
}

void ensure_algebra() {
    static std::once_flag once;
    std::call_once(once, check_direction_algebra);
}

}  // namespace

ContinuumParams ContinuumParams::from(const MaterialParams& mat) {
    mat.validate();
    return {5.0 * kS3 / 3.0 * mat.kZ + 2.0 * kS3 / 3.0 * mat.kC - mat.tau0 / 4.0, 8.0 * kS3 / 3.0 * (mat.kZ + mat.kC)};
}

void check_direction_algebra() {
    const LatticeBasis& b = unit_basis();
    const Vec2 s = b.p1 + b.p2 + b.p3;
    Sym2 t;
    for (int i = 1; i <= 3; ++i) {
        const Vec2& p = b.bond(i);
        t += Sym2{p.x * p.x, p.x * p.y, p.y * p.y};
    }
    const double eps = 1e-14;
    if (std::abs(s.x) > eps || std::abs(s.y) > eps || std::abs(t.xx - 1.5) > eps || std::abs(t.yy - 1.5) > eps ||
        std::abs(t.xy) > eps) {
        throw PreconditionViolated("bond directions fail sum p_i = 0 or sum p_i p_i = 3/2 I");
    }
}

double dir1(const Vec2& grad, const Vec2& a) { return dot(grad, a) / norm(a); }
double dir2(const Sym2& H, const Vec2& a, const Vec2& b) { return H.contract(a, b) / (norm(a) * norm(b)); }

LocalIntegrals local_integrals(const SmoothField& w, const Quadrature& q) {
    const auto r = integrate(q, support_of(w), 2, [&](const Vec2& x, double* out) {
        const Sym2 H = w.hessian(x);
        const double lap = H.trace();
        out[0] = lap * lap;
        out[1] = H.det();
    });
    return {r.values[0], r.values[1]};
}

double U0b(const SmoothField& w, const MaterialParams& mat, const Quadrature& q) {
    const ContinuumParams c = ContinuumParams::from(mat);
    const LocalIntegrals li = local_integrals(w, q);
    return 0.5 * (c.A * li.lap2 - c.B * li.det);
}

double Uz0(const SmoothField& w, const SmoothField& gamma, const MaterialParams& mat, const Quadrature& q) {
    mat.validate();
    ensure_algebra();
    const LatticeBasis& b = unit_basis();
    struct Pair {
        Vec2 d, p;
    };
    const Pair pairs[6] = {{b.d1, b.p3}, {b.d1, b.p1}, {b.d2, b.p3}, {b.d2, b.p2}, {b.d3, b.p1}, {b.d3, b.p2}};
    const auto r = integrate(q, support_of(w, gamma), 1, [&](const Vec2& x, double* out) {
        const Sym2 H = w.hessian(x);
        const Vec2 g = gamma.gradient(x);
        double s = 0.0;
        for (const auto& pr : pairs) {
            const double t = dir2(H, pr.d, pr.p) - 1.5 * dir1(g, pr.d);
            s += t * t;
        }
        out[0] = s;
    });
    return 4.0 * kS3 / 9.0 * mat.kZ * r.values[0];
}

UzTerms Uz00_terms(const SmoothField& w, const SmoothField& gamma, const MaterialParams& mat, const Quadrature& q) {
    mat.validate();
    const auto r = integrate(q, support_of(w, gamma), 3, [&](const Vec2& x, double* out) {
        const Sym2 H = w.hessian(x);
        const Vec2 g = gamma.gradient(x);
        const double lap = H.trace();
        out[0] = lap * lap - 1.6 * H.det();
        out[1] = dot(cross_vector(H), g);
        out[2] = dot(g, g);
    });
    UzTerms t;
    t.local = 5.0 * kS3 / 6.0 * mat.kZ * r.values[0];
    t.cross = kS3 * mat.kZ * r.values[1];
    t.quad = 3.0 * kS3 * mat.kZ * r.values[2];
    return t;
}

double Uz00(const SmoothField& w, const SmoothField& gamma, const MaterialParams& mat, const Quadrature& q) {
    return Uz00_terms(w, gamma, mat, q).total();
}

double Uc0(const SmoothField& w, const MaterialParams& mat, const Quadrature& q) {
    mat.validate();
    if (mat.kC == 0.0) return 0.0;
    const LatticeBasis& b = unit_basis();
    const auto r = integrate(q, support_of(w), 1, [&](const Vec2& x, double* out) {
        const Sym2 H = w.hessian(x);
        double s = 0.0;
        for (int i = 1; i <= 3; ++i) {
            const double t = dir2(H, b.bond(i), perp(b.bond(i)));
            s += t * t;
        }
        out[0] = s;
    });
    return 8.0 * kS3 / 9.0 * mat.kC * r.values[0];
}

double Us0(const SmoothField& w, const MaterialParams& mat, const Quadrature& q) {
    mat.validate();
    if (mat.tau0 == 0.0) return 0.0;
    const LatticeBasis& b = unit_basis();
    const auto r = integrate(q, support_of(w), 1, [&](const Vec2& x, double* out) {
        const Sym2 H = w.hessian(x);
        double s = 0.0;
        for (int i = 1; i <= 3; ++i) s += dir2(H, b.bond(i), b.bond(i));
        out[0] = s * s;
    });
    return -mat.tau0 / 18.0 * r.values[0];
}

}  // namespace hexbend
