// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "hexbend/config.hpp"
#include "hexbend/continuum.hpp"
#include "hexbend/errors.hpp"
#include "hexbend/experiments.hpp"
#include "hexbend/kernels.hpp"
#include "hexbend/nonlocal.hpp"
#include "hexbend/runner.hpp"
#include "hexbend/stencils.hpp"

using namespace hexbend;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

// ---------------------------------------------------------------------------

double stencil_closed_form(const Stencil& s, const LatticeBasis& b, const Sym2& H) {
    const double l = b.ell;
    if (s.kind == StencilKind::Z) {
        const Vec2& pi = b.bond(s.i);
        const Vec2& pj = b.bond(s.j);
        return 2.0 * std::sqrt(3.0) / 3.0 * l * H.contract(pj, pj - pi);
    }
    if (s.kind == StencilKind::C) return 2.0 * l * H.contract(b.bond(s.i), perp(b.bond(s.i)));
    double t = 0.0;
    for (int i = 1; i <= 3; ++i) t += H.contract(b.bond(i), b.bond(i));
    return std::sqrt(3.0 * std::sqrt(3.0)) * l / 6.0 * t;
}

Verdict stencil_exactness() {
    const double ell = 1.0;
    const LatticeBasis b = build_basis(ell);
    const LatticeModel m = build_lattice(b, Region::rectangle({0.0, 0.0}, {4.0, 4.0}), ell);
    const StencilTable t = enumerate_stencils(m);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double affine = 0.0, quad = 0.0;
    std::vector<double> w(m.size());
    for (int rep = 0; rep < 5; ++rep) {
        const double c0 = u(rng), gx = u(rng), gy = u(rng);
        const Sym2 H{u(rng), u(rng), u(rng)};
        const double hn = std::max({std::abs(H.xx), std::abs(H.xy), std::abs(H.yy)});
        for (std::size_t i = 0; i < m.size(); ++i) w[i] = c0 + gx * m.pos(i).x + gy * m.pos(i).y;
        for (std::size_t s = 0; s < t.size(); ++s) affine = std::max(affine, std::abs(t.value(s, w)));
        for (std::size_t i = 0; i < m.size(); ++i) w[i] = 0.5 * H.contract(m.pos(i), m.pos(i));
        for (std::size_t s = 0; s < t.size(); ++s) {
            const double cf = stencil_closed_form(t.stencil(s, m), b, H);
            quad = std::max(quad, std::abs(t.value(s, w) - cf) / std::max(std::abs(cf), ell * hn));
        }
    }
    return {affine <= 1e-14 && quad <= 1e-12,
            std::to_string(t.size()) + " stencils, affine max " + sci(affine) + " (<= 1e-14), quadratic rel " + sci(quad) +
                " (<= 1e-12)"};
}

Verdict assembly_oracle() {
    const double ell = 0.016;
    const LatticeModel m = build_lattice(build_basis(ell), Region::disc({0.0, 0.0}, 1.0), ell);
    const StencilTable t = enumerate_stencils(m);
    const MaterialParams mat{1.0, 0.5, -0.2};
    const QuadraticEnergy q = assemble(m, t, mat);
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        NodalField w(m.size(), 0.0);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m.is_free(i)) w[i] = u(rng);
        const double a = energy_of(q, w).total, d = stencil_energy(m, t, mat, w).total;
        worst = std::max(worst, std::abs(a - d) / std::abs(d));
    }
    return {worst <= 1e-12, std::to_string(m.size()) + " atoms, 20 fields, max rel " + sci(worst) + " (<= 1e-12)"};
}

Verdict continuum_identity() {
    const Quadrature q;
    const MaterialParams mat{1.0, 0.5, -0.2};
    const Poly2 u = Poly2::unit_disc_weight();
    const std::vector<FieldPtr> panel{
        make_bump_poly({0.0, 0.0}, 0.5, Poly2::constant(1.0)),
        make_bump_poly({0.1, -0.05}, 0.45, Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.8}, {1, 1, -1.5}})),
        make_bump_poly({-0.05, 0.1}, 0.4, Poly2::from_terms({{2, 0, 2.0}, {0, 3, -1.0}, {0, 0, 0.3}})),
        make_poly_disc({0.0, 0.05}, 0.5, u.pow(4) * Poly2::from_terms({{0, 0, 1.0}, {1, 2, 2.0}})),
        make_manufactured_pair({0.0, 0.0}, 0.4, 10, 0.01, Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.5}})).w,
    };
    double r1 = 0.0;
    for (const auto& w : panel) {
        const double u0 = U0b(*w, mat, q);
        const double parts = Uz0(*w, *make_zero_field(), mat, q) + Uc0(*w, mat, q) + Us0(*w, mat, q);
        r1 = std::max(r1, std::abs(u0 - parts) / u0);
    }
    const MaterialParams mz{1.0, 0.0, 0.0};
    const std::vector<FieldPtr> gammas{
        make_bump_poly({0.05, 0.0}, 0.4, Poly2::constant(0.5)),
        make_bump_poly({0.0, 0.0}, 0.5, Poly2::from_terms({{1, 0, 1.0}, {0, 1, -0.5}})),
        make_poly_disc({0.0, 0.0}, 0.5, u.pow(3) * Poly2::from_terms({{0, 0, -0.2}, {1, 1, 1.0}})),
        make_bump_poly({-0.1, 0.1}, 0.3, Poly2::from_terms({{0, 2, 2.0}})),
        make_manufactured_pair({0.0, 0.0}, 0.4, 10, 0.01, Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.5}})).gamma,
    };
    double r2 = 0.0;
    for (std::size_t k = 0; k < panel.size(); ++k) {
        const double a = Uz0(*panel[k], *gammas[k], mz, q), c = Uz00(*panel[k], *gammas[k], mz, q);
        r2 = std::max(r2, std::abs(a - c) / std::abs(a));
    }
    return {r1 <= 1e-7 && r2 <= 1e-7,
            "decomposition max rel " + sci(r1) + " (<= 1e-7), directional vs cartesian max rel " + sci(r2) + " (<= 1e-7)"};
}

Verdict recovery_local_criterion() {
    const MaterialParams mat{1.0, 0.5, -0.2};
    const Region dom = Region::disc({0.0, 0.0}, 0.5);
    const std::vector<double> ells = halving_list(0.02, 4);
    const FieldPtr fields[2] = {
        make_bump_poly({0.02, -0.01}, 0.4, Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.8}, {1, 1, -1.5}})),
        make_bump_poly({-0.03, 0.02}, 0.35, Poly2::from_terms({{0, 0, 0.5}, {0, 2, 3.0}, {3, 0, -2.0}})),
    };
    bool ok = true;
    std::string d;
    for (int k = 0; k < 2; ++k) {
        const StudySummary s = recovery_local(*fields[k], mat, ells, Quadrature{}, &dom);
        const bool fine = std::abs(s.relative_error()) <= 5e-3 && s.deviations_decrease(0.1);
        ok = ok && fine;
        d += (k ? "; " : "") + std::string("field ") + std::to_string(k + 1) + ": extrapolated rel " +
             sci(s.relative_error()) + ", finest rel " + sci(s.rows.back().rel_deviation()) + ", order " +
             fmt("%.2f", s.extrapolation.observed_order) + (s.deviations_decrease(0.1) ? ", decreasing" : ", NOT decreasing");
    }
    return {ok, d + " (<= 5e-3)"};
}

Verdict recovery_nonlocal_criterion() {
    const MaterialParams mat{1.0, 0.0, 0.0};
    const Quadrature q;
    const ManufacturedPair mp =
        make_manufactured_pair({0.0, 0.0}, 0.4, 10, 1e-4, Poly2::from_terms({{0, 0, 1.0}, {1, 0, 0.5}}));
    const UzTerms terms = Uz00_terms(*mp.w, *mp.gamma, mat, q);
    const double ref_shifted = Uz0(*mp.w, *mp.gamma, mat, q);

    // gamma* solves -Lap gamma = -(2/3) d_{p1 p2 p3} w; confirm against the grid Poisson solve.
    const GridSpec grid{{{-0.5, -0.5}, {0.5, 0.5}}, 256, 256};
    const GammaSolution gs = solve_gamma(*mp.w, grid, {1e-10, 0});
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= grid.ny; ++j) {
        for (int i = 0; i <= grid.nx; ++i) {
            const double e = mp.gamma->value(grid.point(i, j));
            num += (gs.gamma.values[grid.node(i, j)] - e) * (gs.gamma.values[grid.node(i, j)] - e);
            den += e * e;
        }
    }
    const double gamma_err = std::sqrt(num / den);

    const NonlocalRecovery r =
        recovery_nonlocal(*mp.w, [&](const Vec2& x) { return mp.gamma->value(x); }, ref_shifted, terms.local, mat,
                          halving_list(0.01, 4), Region::disc({0.0, 0.0}, 0.5));
    const double rel = r.shifted.relative_error();
    const double drop = -r.difference.value;  // limit(gamma = 0) - limit(gamma*)
    const double bound = terms.quad - 1e-6;
    const bool ok = std::abs(rel) <= 1e-2 && drop >= bound && gamma_err <= 1e-2;
    return {ok, "shifted limit rel " + sci(rel) + " (<= 1e-2); limit drop " + fmt("%.9f", drop) + " >= 3sqrt3 int|grad g*|^2 - 1e-6 = " +
                    fmt("%.9f", bound) + "; grid gamma vs gamma* rel L2 " + sci(gamma_err)};
}

Verdict minimizer_criterion() {
    const MaterialParams mat{1.0, 0.0, 0.0};
    const MinimizerStudy s =
        minimizer_study(mat, Region::disc({0.0, 0.0}, 1.0), 1.0, {0.036, 0.018, 0.009, 0.0045}, {1e-7, 0});
    bool decreasing = true;
    for (std::size_t k = 1; k < s.rows.size(); ++k) {
        const double a = std::abs(s.rows[k - 1].center_deflection - s.rows[k - 1].ref_deflection);
        const double b = std::abs(s.rows[k].center_deflection - s.rows[k].ref_deflection);
        decreasing = decreasing && b < a && s.rows[k].l2_error < s.rows[k - 1].l2_error;
    }
    const MinimizerRow& fin = s.rows.back();
    const double rel = (fin.center_deflection - fin.ref_deflection) / fin.ref_deflection;
    const bool ok = fin.dofs >= 100000 && std::abs(rel) <= 0.05 && decreasing;
    std::string errs;
    for (const auto& r : s.rows) errs += (errs.empty() ? "" : " ") + fmt("%.4f", (r.center_deflection - r.ref_deflection) / r.ref_deflection);
    return {ok, "finest " + std::to_string(fin.dofs) + " dofs, center rel " + sci(rel) + " (<= 5e-2), center errors [" + errs +
                    "], l2 finest " + sci(fin.l2_error) + (decreasing ? ", decreasing" : ", NOT decreasing")};
}

Verdict poisson_order() {
    auto u = [](const Vec2& x) { return std::sin(M_PI * x.x) * std::sin(2.0 * M_PI * x.y); };
    auto f = [&](const Vec2& x) { return 5.0 * M_PI * M_PI * u(x); };
    std::vector<double> errs;
    for (int n : {32, 64, 128, 256}) {
        const GridSpec g{{{0.0, 0.0}, {1.0, 1.0}}, n, n};
        const GridField s = solve_poisson(g, f, {1e-12, 0}).solution;
        double e2 = 0.0, r[1];
        for (std::size_t t = 0; t < g.triangles(); ++t) {
            const auto nodes = g.triangle_nodes(t);
            integrate_triangle(g.triangle(t), 6, 1,
                               [&](const Vec2& x, const std::array<double, 3>& b, double* out) {
                                   double uh = 0.0;
                                   for (int k = 0; k < 3; ++k) uh += b[k] * s.values[nodes[k]];
                                   out[0] = (uh - u(x)) * (uh - u(x));
                               },
                               r);
            e2 += r[0];
        }
        errs.push_back(std::sqrt(e2));
    }
    double worst = 1e300;
    std::string d;
    for (std::size_t k = 1; k < errs.size(); ++k) {
        const double slope = std::log2(errs[k - 1] / errs[k]);
        worst = std::min(worst, slope);
        d += (k > 1 ? " " : "") + fmt("%.3f", slope);
    }
    return {worst >= 1.9, "L2 slopes [" + d + "] (>= 1.9), finest error " + sci(errs.back())};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict psd_and_determinism() {
    const double ell = 0.02;
    const LatticeModel m = build_lattice(build_basis(ell), Region::disc({0.0, 0.0}, 1.0), ell);
    const QuadraticEnergy q = assemble(m, enumerate_stencils(m), {1.0, 0.5, -0.2});
    const double knorm = q.matrix().norm_inf();
    std::mt19937_64 rng(808);
    std::normal_distribution<double> g;
    std::vector<double> x(q.dofs()), y(q.dofs());
    double min_rq = 1e300;
    for (int p = 0; p < 100; ++p) {
        if (p % 2 == 0) {
            for (auto& v : x) v = g(rng);
        } else {
            const double kx = 1.0 + p, ky = 0.5 * p;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const Vec2& pos = m.pos(m.dof_atoms()[k]);
                const double stagger = p % 4 == 3 ? (m.atom(m.dof_atoms()[k]).m ? 1.0 : -1.0) : 0.0;
                x[k] = std::cos(kx * pos.x + ky * pos.y) * (1.0 - dot(pos, pos)) + stagger;
            }
        }
        q.matrix().multiply(x, y);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            num += x[k] * y[k];
            den += x[k] * x[k];
        }
        min_rq = std::min(min_rq, num / den);
    }

    namespace fs = std::filesystem;
    const std::string cfg = R"({
        "material": {"kZ": 1.0, "kC": 0.5, "tau0": -0.2},
        "domain": {"kind": "disc", "radius": 1.0},
        "study": {"name": "minimizer", "ell": [0.1, 0.05, 0.025]},
        "threads": 1
    })";
    std::string csv[2], sum[2];
    std::ostringstream log;
    for (int run = 0; run < 2; ++run) {
        nlohmann::json j = nlohmann::json::parse(cfg);
        const fs::path dir = fs::path("acceptance_out") / ("determinism_" + std::to_string(run));
        fs::remove_all(dir);
        j["output"] = {{"dir", dir.string()}, {"cg_tol", 1e-9}};
        run_study(parse_config(j), log);
        csv[run] = slurp(dir / "minimizer.csv");
        sum[run] = slurp(dir / "summary.json");
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    const bool ok = min_rq >= -1e-12 * knorm && same;
    return {ok, "min Rayleigh quotient " + sci(min_rq) + " (>= " + sci(-1e-12 * knorm) + "), reruns " +
                    (same ? "byte-identical" : "DIFFER") + " (" + std::to_string(csv[0].size()) + " bytes)"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Verdict (*run)();
    };
    const Criterion criteria[] = {
        {"stencil_exactness", stencil_exactness},
        {"assembly_oracle", assembly_oracle},
        {"continuum_identity", continuum_identity},
        {"recovery_local", recovery_local_criterion},
        {"recovery_nonlocal", recovery_nonlocal_criterion},
        {"clamped_disc_minimizer", minimizer_criterion},
        {"poisson_order", poisson_order},
        {"psd_and_determinism", psd_and_determinism},
    };
    std::printf("kernels: %s\n", std::string(simd::to_string(simd::active_isa())).c_str());
    int failed = 0, n = 0;
    for (const auto& c : criteria) {
        ++n;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %d %-24s %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", n, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
