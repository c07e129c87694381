#include "hexbend/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hexbend/errors.hpp"
#include "hexbend/lattice.hpp"
#include "hexbend/stencils.hpp"

namespace hexbend {

namespace {

void check_ells(const std::vector<double>& ell, std::size_t n_values) {
    if (ell.size() != n_values) throw DimensionMismatch("one value per lattice size expected");
    for (std::size_t k = 0; k < ell.size(); ++k) {
        if (!(ell[k] > 0.0)) throw PreconditionViolated("lattice sizes must be positive");
        if (k > 0 && !(ell[k] < ell[k - 1])) throw PreconditionViolated("lattice sizes must strictly decrease");
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Sum of squared stencil values per part, via the vectorised kernel.
EnergyParts energy_from_values(const StencilTable& table, const MaterialParams& mat, std::span<const double> w) {
    const std::vector<double> th = table.values(w);
    double s[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < th.size(); ++k) {
        const StencilKind kind = table.kind(k);
        const int p = kind == StencilKind::Z ? 0 : kind == StencilKind::C ? 1 : 2;
        s[p] += th[k] * th[k];
    }
    EnergyParts e;
    e.z_part = 0.5 * mat.kZ * s[0];
    e.c_part = 0.5 * mat.kC * s[1];
    e.s_part = -0.5 * mat.tau0 * s[2];
    e.total = e.z_part + e.c_part + e.s_part;
    return e;
}

}  // namespace

Extrapolation richardson(const std::vector<double>& ell, const std::vector<double>& values) {
    check_ells(ell, values.size());
    Extrapolation e;
    const std::size_t n = values.size();
    if (n == 0) throw PreconditionViolated("richardson: empty table");
    if (n == 1) {
        e.value = values[0];
        return e;
    }
    if (n >= 3) {
        const double d1 = std::abs(values[n - 3] - values[n - 2]);
        const double d2 = std::abs(values[n - 2] - values[n - 1]);
        const double r = std::sqrt((ell[n - 3] / ell[n - 2]) * (ell[n - 2] / ell[n - 1]));
        e.observed_order = (d1 > 0.0 && d2 > 0.0) ? std::log(d1 / d2) / std::log(r) : 0.0;
    } else {
        e.observed_order = 1.0;
    }
    e.leading_order = e.observed_order > 1.5 ? 2 : 1;
    e.eliminations = static_cast<int>(n) - 1;
    e.value = richardson_fixed(ell, values, e.leading_order, e.eliminations);
    return e;
}

double richardson_fixed(const std::vector<double>& ell, const std::vector<double>& values, int first_order,
                        int eliminations) {
    check_ells(ell, values.size());
    if (eliminations < 0 || eliminations >= static_cast<int>(values.size())) {
        throw PreconditionViolated("richardson: too many eliminations for the table");
    }
    // Fit a0 + sum_m c_m l^(q+m), m < eliminations, through the finest levels.
    const int n = eliminations + 1;
    const std::size_t first = values.size() - n;
    const double scale = ell[first];
    std::vector<double> A(static_cast<std::size_t>(n) * n), b(n);
    for (int r = 0; r < n; ++r) {
        const double s = ell[first + r] / scale;
        A[r * n] = 1.0;
        for (int m = 0; m < eliminations; ++m) A[r * n + 1 + m] = std::pow(s, first_order + m);
        b[r] = values[first + r];
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        if (A[piv * n + c] == 0.0) throw PreconditionViolated("richardson: singular table");
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            const double f = A[r * n + c] / A[c * n + c];
            for (int k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
        x[r] = s / A[r * n + r];
    }
    return x[0];
}

std::vector<double> halving_list(double first, int count) {
    std::vector<double> v;
    for (int k = 0; k < count; ++k) v.push_back(first / std::pow(2.0, k));
    return v;
}

double StudyRow::rel_deviation() const {
    return reference != 0.0 ? (value - reference) / std::abs(reference) : value - reference;
}

double StudySummary::relative_error() const {
    return reference != 0.0 ? (extrapolation.value - reference) / std::abs(reference) : extrapolation.value - reference;
}

bool StudySummary::deviations_decrease(double slack) const {
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double prev = std::abs(rows[k - 1].value - rows[k - 1].reference);
        const double cur = std::abs(rows[k].value - rows[k].reference);
        if (cur > (1.0 + slack) * prev) return false;
    }
    return true;
}

Region recovery_region(const SmoothField& w, const SmoothField* gamma, double margin) {
    Box b = w.support();
    if (gamma != nullptr && !gamma->support().empty()) b = b.empty() ? gamma->support() : bounding_union(b, gamma->support());
    if (b.empty()) b = {{-0.5, -0.5}, {0.5, 0.5}};
    const Vec2 c = 0.5 * (b.lo + b.hi);
    const double r = 0.5 * norm(b.hi - b.lo);
    return Region::disc(c, r + margin);
}

EnergyParts sampled_energy(const SmoothField& w, const MaterialParams& mat, const Region& region, double ell) {
    const LatticeModel model = build_lattice(build_basis(ell), region, ell);
    const StencilTable table = enumerate_stencils(model);
    const NodalField wl = sample(model, [&](const Vec2& x) { return w.value(x); });
    return energy_from_values(table, mat, wl);
}

StudySummary recovery_local(const SmoothField& w, const MaterialParams& mat, const std::vector<double>& ells,
                            const Quadrature& q, const Region* region) {
    mat.validate();
    if (mat.kC == 0.0 && mat.tau0 == 0.0) {
        throw PreconditionViolated("local recovery needs kC != 0 or tau0 != 0");
    }
    const Region dom = region ? *region : recovery_region(w);
    StudySummary s;
    s.study = "recovery_local";
    s.reference = U0b(w, mat, q);
    std::vector<double> vals;
    for (double ell : ells) {
        const LatticeModel model = build_lattice(build_basis(ell), dom, ell);
        const StencilTable table = enumerate_stencils(model);
        const NodalField wl = sample(model, [&](const Vec2& x) { return w.value(x); });
        StudyRow r;
        r.ell = ell;
        r.value = energy_from_values(table, mat, wl).total;
        r.reference = s.reference;
        r.atoms = model.size();
        r.free = model.free_count();
        s.rows.push_back(r);
        vals.push_back(r.value);
    }
    s.extrapolation = richardson(ells, vals);
    return s;
}

NonlocalRecovery recovery_nonlocal(const SmoothField& w, const std::function<double(const Vec2&)>& gamma,
                                   double reference_shifted, double reference_plain, const MaterialParams& mat,
                                   const std::vector<double>& ells, const Region& region) {
    mat.validate();
    if (mat.kC != 0.0 || mat.tau0 != 0.0) throw PreconditionViolated("non-local recovery needs kC = tau0 = 0");
    NonlocalRecovery out;
    out.shifted.study = "recovery_nonlocal";
    out.plain.study = "recovery_nonlocal_plain";
    out.shifted.reference = reference_shifted;
    out.plain.reference = reference_plain;
    std::vector<double> vs, vp, diff;
    for (double ell : ells) {
        const LatticeModel model = build_lattice(build_basis(ell), region, ell);
        const StencilTable table = enumerate_stencils(model);
        auto wf = [&](const Vec2& x) { return w.value(x); };
        const NodalField plain = sample(model, wf);
        const NodalField shifted = sample_shifted(model, wf, [&](const Vec2& x) { return 1.5 * ell * gamma(x); });
        const double up = energy_from_values(table, mat, plain).z_part;
        const double us = energy_from_values(table, mat, shifted).z_part;
        out.plain.rows.push_back({ell, up, reference_plain, model.size(), model.free_count()});
        out.shifted.rows.push_back({ell, us, reference_shifted, model.size(), model.free_count()});
        vp.push_back(up);
        vs.push_back(us);
        diff.push_back(us - up);
    }
    out.plain.extrapolation = richardson(ells, vp);
    out.shifted.extrapolation = richardson(ells, vs);
    out.difference = richardson(ells, diff);
    return out;
}

MinimizerStudy minimizer_study(const MaterialParams& mat, const Region& disc, double f, const std::vector<double>& ells,
                               const CgOptions& opt) {
    mat.validate();
    if (disc.kind != Region::Kind::Disc) throw PreconditionViolated("the plate benchmark needs a disc domain");
    const Vec2 center = disc.center;
    const PlateReference ref = plate_reference(center, disc.radius, f, mat);
    MinimizerStudy st;
    st.summary.study = "minimizer";
    st.summary.reference = ref.center_deflection();
    std::vector<double> centers;
    for (double ell : ells) {
        const LatticeModel model = build_lattice(build_basis(ell), disc, ell);
        const StencilTable table = enumerate_stencils(model);
        const QuadraticEnergy q = assemble(model, table, mat);
        const MinimizeResult res = minimize(q, load_vector(model, LoadSpec::uniform(f)), opt);

        double num2 = 0.0, den2 = 0.0;
        for (std::size_t i = 0; i < model.size(); ++i) {
            if (!disc.contains(model.pos(i))) continue;
            const double r = ref(model.pos(i));
            num2 += (res.w[i] - r) * (res.w[i] - r);
            den2 += r * r;
        }
        MinimizerRow row;
        row.ell = ell;
        row.l2_error = den2 > 0.0 ? std::sqrt(num2 / den2) : std::sqrt(num2);
        row.center_deflection = res.w[model.nearest(center)];
        row.ref_deflection = ref.center_deflection();
        row.dofs = q.dofs();
        row.iterations = res.cg.iterations;
        st.rows.push_back(row);
        st.summary.rows.push_back({ell, row.center_deflection, row.ref_deflection, model.size(), model.free_count()});
        centers.push_back(row.center_deflection);
    }
    st.summary.extrapolation = richardson(ells, centers);
    return st;
}

GammaEffect gamma_effect(const SmoothField& w, const MaterialParams& mat, const GridSpec& grid, const Quadrature& q,
                         const CgOptions& opt) {
    mat.validate();
    if (mat.kC != 0.0 || mat.tau0 != 0.0) throw PreconditionViolated("gamma effect study needs kC = tau0 = 0");
    const NonlocalEnergy ne = nonlocal_energy(w, mat, grid, q, opt);
    GammaEffect g;
    g.uz_gamma0 = ne.terms.local;
    g.uz_gamma_h = ne.value();
    g.gap = g.uz_gamma0 - g.uz_gamma_h;
    g.grad_energy = ne.terms.quad;
    g.cg = ne.solution.cg;
    return g;
}

void write_study_csv(std::ostream& out, const StudySummary& s) {
    out << "ell,value,reference,rel_deviation,atoms,free\n";
    for (const auto& r : s.rows) {
        out << num(r.ell) << ',' << num(r.value) << ',' << num(r.reference) << ',' << num(r.rel_deviation()) << ','
            << r.atoms << ',' << r.free << '\n';
    }
    out << "0," << num(s.extrapolation.value) << ',' << num(s.reference) << ',' << num(s.relative_error()) << ",0,0\n";
}

void write_minimizer_csv(std::ostream& out, const MinimizerStudy& s) {
    out << "ell,l2_error,center_deflection,ref_deflection\n";
    for (const auto& r : s.rows) {
        out << num(r.ell) << ',' << num(r.l2_error) << ',' << num(r.center_deflection) << ',' << num(r.ref_deflection)
            << '\n';
    }
    out << "0,," << num(s.summary.extrapolation.value) << ',' << num(s.summary.reference) << '\n';
}

}  // namespace hexbend
