#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "hexbend/continuum.hpp"
#include "hexbend/energy.hpp"
#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"
#include "hexbend/runner.hpp"
#include "hexbend/stencils.hpp"

namespace hexbend {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

/// Closed form of a stencil on w = 1/2 x.Hx.
double closed_form(const Stencil& s, const LatticeBasis& b, const Sym2& H) {
    const double l = b.ell;
    switch (s.kind) {
        case StencilKind::Z: {
            const Vec2& pi = b.bond(s.i);
            const Vec2& pj = b.bond(s.j);
            return 2.0 * std::sqrt(3.0) / 3.0 * l * H.contract(pj, pj - pi);
        }
        case StencilKind::C: return 2.0 * l * H.contract(b.bond(s.i), perp(b.bond(s.i)));
        default: {
            double t = 0.0;
            for (int i = 1; i <= 3; ++i) t += H.contract(b.bond(i), b.bond(i));
            return std::sqrt(3.0 * std::sqrt(3.0)) * l / 6.0 * t;
        }
    }
}

SelftestCheck check_algebra() {
    try {
        check_direction_algebra();
        return {"bond_algebra", true, "sum p_i = 0, sum p_i p_i = 3/2 I"};
    } catch (const Error& e) {
        return {"bond_algebra", false, e.what()};
    }
}

SelftestCheck check_stencils() {
    const double ell = 1.0;
    const LatticeBasis b = build_basis(ell);
    const LatticeModel m = build_lattice(b, Region::rectangle({0.0, 0.0}, {3.0, 3.0}), ell);
    const StencilTable t = enumerate_stencils(m);
    std::vector<double> affine(m.size()), quad(m.size());
    const Sym2 H{0.7, -0.3, 1.9};
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Vec2& x = m.pos(i);
        affine[i] = 0.4 - 1.3 * x.x + 0.8 * x.y;
        quad[i] = 0.5 * H.contract(x, x);
    }
    const double hnorm = std::max({std::abs(H.xx), std::abs(H.xy), std::abs(H.yy)});
    double worst_affine = 0.0, worst_quad = 0.0;
    for (std::size_t s = 0; s < t.size(); ++s) {
        worst_affine = std::max(worst_affine, std::abs(t.value(s, affine)));
        const double cf = closed_form(t.stencil(s, m), b, H);
        const double v = t.value(s, quad);
        worst_quad = std::max(worst_quad, std::abs(v - cf) / std::max(std::abs(cf), ell * hnorm));
    }
    const bool ok = worst_affine <= 1e-14 && worst_quad <= 1e-12;
    return {"stencil_exactness", ok, "affine " + sci(worst_affine) + ", quadratic " + sci(worst_quad)};
}

SelftestCheck check_assembly() {
    const double ell = 0.05;
    const LatticeModel m = build_lattice(build_basis(ell), Region::disc({0.0, 0.0}, 1.0), ell);
    const StencilTable t = enumerate_stencils(m);
    const MaterialParams mat{1.0, 0.5, -0.2};
    const QuadraticEnergy q = assemble(m, t, mat);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        NodalField w(m.size(), 0.0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m.is_free(i)) w[i] = u(rng);
        }
        const double a = energy_of(q, w).total;
        const double d = stencil_energy(m, t, mat, w).total;
        worst = std::max(worst, std::abs(a - d) / std::abs(d));
    }
    return {"assembly_oracle", worst <= 1e-12, "relative " + sci(worst)};
}

SelftestCheck check_kernels() {
    if (simd::detected_isa() != simd::Isa::Avx2) return {"kernel_equivalence", true, "no AVX2 on this CPU"};
#if defined(HEXBEND_HAVE_AVX2)
    const auto& s = simd::scalar_kernels();
    const auto& v = simd::avx2_kernels();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 1003;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);
    const double e = std::abs(s.dot(x.data(), y.data(), n) - v.dot(x.data(), y.data(), n)) / scale;

    const double ell = 0.1;
    const LatticeModel m = build_lattice(build_basis(ell), Region::disc({0.0, 0.0}, 1.0), ell);
    const StencilTable t = enumerate_stencils(m);
    std::vector<double> w(m.size()), a(t.size()), b(t.size());
    for (auto& wi : w) wi = u(rng);
    s.stencil_values(t.size(), t.atom_rows().data(), t.pattern_ids().data(), t.coef_table(), w.data(), a.data());
    v.stencil_values(t.size(), t.atom_rows().data(), t.pattern_ids().data(), t.coef_table(), w.data(), b.data());
    double es = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) es = std::max(es, std::abs(a[k] - b[k]) / (std::abs(a[k]) + 1.0 / ell));
    return {"kernel_equivalence", e <= 1e-13 && es <= 1e-13, "dot " + sci(e) + ", stencils " + sci(es)};
#else
    return {"kernel_equivalence", true, "AVX2 variants not built"};
#endif
}

SelftestCheck check_continuum() {
    const MaterialParams mat{1.0, 0.5, -0.2};
    const Quadrature q;
    const FieldPtr w = make_bump_poly({0.1, -0.05}, 0.5, Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.8}, {1, 1, -1.5}}));
    const FieldPtr g = make_bump_poly({-0.05, 0.1}, 0.4, Poly2::from_terms({{0, 0, 0.3}, {0, 1, 0.5}}));
    const double u0 = U0b(*w, mat, q);
    const double parts = Uz0(*w, *make_zero_field(), mat, q) + Uc0(*w, mat, q) + Us0(*w, mat, q);
    const double r1 = std::abs(u0 - parts) / u0;
    const double a = Uz0(*w, *g, mat, q), c = Uz00(*w, *g, mat, q);
    const double r2 = std::abs(a - c) / std::max(1.0, std::abs(c));
    const double us = Us0(*w, mat, q), alt = -mat.tau0 / 8.0 * local_integrals(*w, q).lap2;
    const double r3 = std::abs(us - alt) / alt;
    const bool ok = r1 <= 1e-7 && r2 <= 1e-7 && r3 <= 1e-10;
    return {"continuum_identities", ok,
            "decomposition " + sci(r1) + ", directional/cartesian " + sci(r2) + ", self-energy " + sci(r3)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest() {
    std::vector<SelftestCheck> out;
    auto guarded = [&](SelftestCheck (*f)(), const char* name) {
        try {
            out.push_back(f());
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    };
    guarded(check_algebra, "bond_algebra");
    guarded(check_stencils, "stencil_exactness");
    guarded(check_assembly, "assembly_oracle");
    guarded(check_kernels, "kernel_equivalence");
    guarded(check_continuum, "continuum_identities");
    return out;
}

}  // namespace hexbend
