#include "hexbend/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "hexbend/errors.hpp"
#include "hexbend/experiments.hpp"
#include "hexbend/kernels.hpp"

namespace hexbend {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigInvalid("output.dir: cannot write " + p.string());
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_summary(const fs::path& dir, const Config& c, const RunOutcome& r, const json& details) {
    json j = {{"study", r.study},
              {"params", {{"material", c.effective()["material"]}, {"study", c.effective()["study"]}}},
              {"extrapolated_value", r.extrapolated_value},
              {"reference_value", r.reference_value},
              {"relative_error", r.relative_error}};
    if (!details.is_null()) j["details"] = details;
    open_out(dir / "summary.json") << j.dump(2) << '\n';
}

Quadrature quadrature_of(const Config& c) {
    Quadrature q;
    q.tolerance = c.output.quad_tol;
    return q;
}

void require_inside(const SmoothField& f, const Region& dom, const char* what) {
    const Box s = f.support();
    if (s.empty()) return;
    const Vec2 corners[4] = {s.lo, {s.hi.x, s.lo.y}, s.hi, {s.lo.x, s.hi.y}};
    for (const auto& p : corners) {
        if (dom.kind == Region::Kind::Rectangle && !dom.contains(p)) {
            throw ConfigInvalid(std::string(what) + ": support is not inside the domain");
        }
    }
    if (dom.kind == Region::Kind::Disc) {
        const Vec2 c = 0.5 * (s.lo + s.hi);
        if (norm(c - dom.center) + 0.5 * (s.hi.x - s.lo.x) >= dom.radius) {
            throw ConfigInvalid(std::string(what) + ": support is not inside the domain");
        }
    }
}

GridSpec grid_for(const Region& dom, int nx) {
    const Box b = dom.bounding_box();
    const double hx = (b.hi.x - b.lo.x) / nx;
    const int ny = std::max(2, static_cast<int>(std::lround((b.hi.y - b.lo.y) / hx)));
    return {b, nx, ny};
}

RunOutcome run_recovery_local(const Config& c, const fs::path& dir, std::ostream& log) {
    const FieldPtr w = c.study.field.build();
    require_inside(*w, c.domain, "study.field");
    const std::vector<double> ells = study_ells(c);
    const StudySummary s = recovery_local(*w, c.material, ells, quadrature_of(c), &c.domain);
    auto out = open_out(dir / "recovery_local.csv");
    write_study_csv(out, s);
    for (const auto& r : s.rows) log << "  ell=" << num(r.ell) << "  U=" << num(r.value) << '\n';
    RunOutcome o{s.study, s.extrapolation.value, s.reference, s.relative_error()};
    write_summary(dir, c, o,
                  {{"observed_order", s.extrapolation.observed_order},
                   {"deviations_decrease", s.deviations_decrease()}});
    return o;
}

RunOutcome run_recovery_nonlocal(const Config& c, const fs::path& dir, std::ostream& log) {
    const MaterialParams& mat = c.material;
    const Quadrature q = quadrature_of(c);
    const std::vector<double> ells = study_ells(c);
    FieldPtr w;
    std::function<double(const Vec2&)> gamma;
    double ref_shifted = 0.0, ref_plain = 0.0;
    json details;
    GridField grid_gamma;

    if (c.study.gamma == "manufactured") {
        const ManufacturedPair pair = c.study.field.build_pair();
        w = pair.w;
        require_inside(*w, c.domain, "study.field");
        const UzTerms t = Uz00_terms(*w, *pair.gamma, mat, q);
        ref_plain = t.local;
        ref_shifted = Uz0(*w, *pair.gamma, mat, q);
        gamma = [g = pair.gamma](const Vec2& x) { return g->value(x); };
        details["grad_energy"] = t.quad;
    } else if (c.study.gamma == "grid") {
        if (c.domain.kind != Region::Kind::Rectangle) throw ConfigInvalid("domain.kind: gamma = grid needs a rectangle");
        w = c.study.field.build();
        require_inside(*w, c.domain, "study.field");
        const NonlocalEnergy ne = nonlocal_energy(*w, mat, grid_for(c.domain, c.study.grid_cells.back()), q,
                                                  {c.output.poisson_tol, 0});
        ref_plain = ne.terms.local;
        ref_shifted = ne.value();
        grid_gamma = ne.solution.gamma;
        gamma = [&grid_gamma](const Vec2& x) { return grid_gamma.value(x); };
        details["grad_energy"] = ne.terms.quad;
    } else {
        w = c.study.field.build();
        require_inside(*w, c.domain, "study.field");
        ref_plain = ref_shifted = Uz0(*w, *make_zero_field(), mat, q);
        gamma = [](const Vec2&) { return 0.0; };
    }

    const NonlocalRecovery r = recovery_nonlocal(*w, gamma, ref_shifted, ref_plain, mat, ells, c.domain);
    {
        auto out = open_out(dir / "recovery_nonlocal.csv");
        write_study_csv(out, r.shifted);
    }
    {
        auto out = open_out(dir / "recovery_nonlocal_plain.csv");
        write_study_csv(out, r.plain);
    }
    for (std::size_t k = 0; k < ells.size(); ++k) {
        log << "  ell=" << num(ells[k]) << "  U(gamma)=" << num(r.shifted.rows[k].value)
            << "  U(0)=" << num(r.plain.rows[k].value) << '\n';
    }
    details["plain_extrapolated"] = r.plain.extrapolation.value;
    details["plain_reference"] = ref_plain;
    details["difference_extrapolated"] = r.difference.value;
    details["difference_reference"] = ref_shifted - ref_plain;
    details["gamma"] = c.study.gamma;
    RunOutcome o{r.shifted.study, r.shifted.extrapolation.value, ref_shifted, r.shifted.relative_error()};
    write_summary(dir, c, o, details);
    return o;
}

RunOutcome run_minimizer(const Config& c, const fs::path& dir, std::ostream& log) {
    if (c.domain.kind != Region::Kind::Disc) throw ConfigInvalid("domain.kind: the minimizer study needs a disc");
    const MinimizerStudy s =
        minimizer_study(c.material, c.domain, c.study.load, study_ells(c), {c.output.cg_tol, 0});
    auto out = open_out(dir / "minimizer.csv");
    write_minimizer_csv(out, s);
    json iters = json::array(), dofs = json::array();
    for (const auto& r : s.rows) {
        log << "  ell=" << num(r.ell) << "  dofs=" << r.dofs << "  cg=" << r.iterations
            << "  w(0)=" << num(r.center_deflection) << "  l2=" << num(r.l2_error) << '\n';
        iters.push_back(r.iterations);
        dofs.push_back(r.dofs);
    }
    const double fin = s.rows.back().center_deflection;
    RunOutcome o{"minimizer", s.summary.extrapolation.value, s.summary.reference, s.summary.relative_error()};
    write_summary(dir, c, o,
                  {{"finest_center_deflection", fin},
                   {"finest_relative_error", (fin - s.summary.reference) / s.summary.reference},
                   {"dofs", dofs},
                   {"cg_iterations", iters}});
    return o;
}

RunOutcome run_gamma_effect(const Config& c, const fs::path& dir, std::ostream& log) {
    if (c.domain.kind != Region::Kind::Rectangle) throw ConfigInvalid("domain.kind: gamma_effect needs a rectangle");
    const Quadrature q = quadrature_of(c);
    const FieldPtr w = c.study.field.build();
    require_inside(*w, c.domain, "study.field");
    double reference = std::nan("");
    if (c.study.field.type == "manufactured") {
        const ManufacturedPair pair = c.study.field.build_pair();
        reference = Uz00_terms(*w, *pair.gamma, c.material, q).quad;
    }
    auto out = open_out(dir / "gamma_effect.csv");
    out << "h,uz_gamma0,uz_gamma_h,gap,grad_energy,cg_iterations\n";
    std::vector<double> hs, gaps, grads;
    double uz0 = 0.0;
    for (int n : c.study.grid_cells) {
        const GridSpec g = grid_for(c.domain, n);
        const GammaEffect e = gamma_effect(*w, c.material, g, q, {c.output.poisson_tol, 0});
        out << num(g.hx()) << ',' << num(e.uz_gamma0) << ',' << num(e.uz_gamma_h) << ',' << num(e.gap) << ','
            << num(e.grad_energy) << ',' << e.cg.iterations << '\n';
        log << "  h=" << num(g.hx()) << "  gap=" << num(e.gap) << "  grad=" << num(e.grad_energy) << '\n';
        hs.push_back(g.hx());
        gaps.push_back(e.gap);
        grads.push_back(e.grad_energy);
        uz0 = e.uz_gamma0;
    }
    const Extrapolation gx = richardson(hs, gaps);
    const Extrapolation qx = richardson(hs, grads);
    if (std::isnan(reference)) reference = qx.value;
    out << "0," << num(uz0) << ',' << num(uz0 - gx.value) << ',' << num(gx.value) << ',' << num(qx.value) << ",0\n";
    const double rel = reference != 0.0 ? (gx.value - reference) / std::abs(reference) : gx.value - reference;
    RunOutcome o{"gamma_effect", gx.value, reference, rel};
    write_summary(dir, c, o, {{"uz_gamma0", uz0}, {"observed_order", gx.observed_order}});
    return o;
}

RunOutcome run_selftest_study(const Config& c, const fs::path& dir, std::ostream& log) {
    const auto checks = run_selftest();
    auto out = open_out(dir / "selftest.csv");
    out << "check,passed,detail\n";
    int failed = 0;
    for (const auto& k : checks) {
        out << k.name << ',' << (k.passed ? 1 : 0) << ",\"" << k.detail << "\"\n";
        log << (k.passed ? "  ok    " : "  FAIL  ") << k.name << "  " << k.detail << '\n';
        failed += k.passed ? 0 : 1;
    }
    RunOutcome o{"selftest", static_cast<double>(checks.size() - failed), static_cast<double>(checks.size()), 0.0,
                 failed == 0};
    o.relative_error = checks.empty() ? 0.0 : static_cast<double>(failed) / checks.size();
    write_summary(dir, c, o, {{"failed", failed}});
    return o;
}

}  // namespace

RunOutcome run_study(const Config& c, std::ostream& log) {
    simd::set_threads(c.threads);
    const fs::path dir(c.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigInvalid("output.dir: " + ec.message());
    open_out(dir / "config.effective.json") << c.effective().dump(2) << '\n';
    log << "study " << c.study.name << " -> " << dir.string() << '\n';
    if (c.study.name == "recovery_local") return run_recovery_local(c, dir, log);
    if (c.study.name == "recovery_nonlocal") return run_recovery_nonlocal(c, dir, log);
    if (c.study.name == "minimizer") return run_minimizer(c, dir, log);
    if (c.study.name == "gamma_effect") return run_gamma_effect(c, dir, log);
    return run_selftest_study(c, dir, log);
}

}  // namespace hexbend
