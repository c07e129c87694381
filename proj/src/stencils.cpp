#include "hexbend/stencils.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"

namespace hexbend {

namespace {

int wrap3(int i) { return ((i - 1) % 3 + 3) % 3 + 1; }

double dihedral_scale(double ell) { return 2.0 * std::sqrt(3.0) / (3.0 * ell); }
double wedge_scale(double ell) { return std::sqrt(3.0 * std::sqrt(3.0)) / ell; }

void require_l2(const AtomId& center, const char* what) {
    if (center.m != 1) {
        throw PreconditionViolated(std::string(what) + " stencils are centred on L2 sites (m = 1)");
    }
}

void require_bond_index(int i) {
    if (i < 1 || i > 3) throw BadVariant("bond index " + std::to_string(i) + " outside {1,2,3}");
}

}  // namespace

std::string_view to_string(StencilKind k) {
    switch (k) {
        case StencilKind::Z: return "Z";
        case StencilKind::C: return "C";
        case StencilKind::S1: return "S1";
        case StencilKind::S2: return "S2";
    }
    return "?";
}

double Stencil::apply(const std::function<double(const Vec2&)>& w, const LatticeBasis& basis) const {
    double s = 0.0;
    for (const auto& e : entries) s += e.coef * w(position(basis, e.atom));
    return s;
}

Stencil z_stencil(const LatticeBasis& basis, const AtomId& center, int i, int j) {
    require_bond_index(i);
    require_bond_index(j);
    if (wrap3(j) == wrap3(i)) throw BadVariant("Z stencil needs j != i");
    require_l2(center, "Z");
    const double c = dihedral_scale(basis.ell);
    const LatticeOffset pi = bond_offset(i);
    const LatticeOffset pj = bond_offset(j);
    Stencil s;
    s.kind = StencilKind::Z;
    s.center = center;
    s.i = i;
    s.j = j;
    s.entries = {{{shifted(center, pi - pj), c},
                  {shifted(center, pi), -c},
                  {shifted(center, pj), c},
                  {center, -c}}};
    return s;
}

Stencil c_stencil(const LatticeBasis& basis, const AtomId& center, int i, int sign) {
    require_bond_index(i);
    if (sign != 1 && sign != -1) throw BadVariant("C stencil orientation must be +1 or -1");
    require_l2(center, "C");
    const double c = dihedral_scale(basis.ell);
    const LatticeOffset pi = bond_offset(i);
    // The + stencil pairs p_{i+1} with p_{i+2}; the - stencil swaps them and
    // carries an overall minus sign.
    const LatticeOffset near = bond_offset(sign > 0 ? i + 1 : i + 2);
    const LatticeOffset far = bond_offset(sign > 0 ? i + 2 : i + 1);
    const double g = sign > 0 ? c : -c;
    Stencil s;
    s.kind = StencilKind::C;
    s.center = center;
    s.i = i;
    s.j = sign;
    s.entries = {{{center, 2.0 * g},
                  {shifted(center, near), -g},
                  {shifted(center, pi - far), g},
                  {shifted(center, pi), -2.0 * g}}};
    return s;
}

Stencil s_stencil(const LatticeBasis& basis, const AtomId& center) {
    const double k = wedge_scale(basis.ell);
    const int dir = center.m == 0 ? -1 : 1;
    Stencil s;
    s.kind = center.m == 0 ? StencilKind::S1 : StencilKind::S2;
    s.center = center;
    s.entries[0] = {center, -k};
    for (int b = 1; b <= 3; ++b) {
        const LatticeOffset o = bond_offset(b);
        s.entries[b] = {shifted(center, dir > 0 ? o : -o), k / 3.0};
    }
    return s;
}

StencilTable::StencilTable(double ell) {
    const double c = dihedral_scale(ell);
    const double k = wedge_scale(ell);
    coef_table_[kPatternZ] = {c, -c, c, -c};
    coef_table_[kPatternCPlus] = {2.0 * c, -c, c, -2.0 * c};
    coef_table_[kPatternCMinus] = {-2.0 * c, c, -c, 2.0 * c};
    coef_table_[kPatternS] = {-k, k / 3.0, k / 3.0, k / 3.0};
}

void StencilTable::push(const Stencil& st, const std::array<std::int32_t, 4>& resolved, std::int32_t center,
                        std::uint8_t pattern, std::int8_t i, std::int8_t j) {
    kinds_.push_back(st.kind);
    patterns_.push_back(pattern);
    var_i_.push_back(i);
    var_j_.push_back(j);
    centers_.push_back(center);
    atoms_.push_back(resolved);
    ++counts_[static_cast<int>(st.kind)];
}

double StencilTable::value(std::size_t s, std::span<const double> w) const {
    const auto& c = coefs(s);
    const auto& a = atoms_[s];
    return c[0] * w[a[0]] + c[1] * w[a[1]] + c[2] * w[a[2]] + c[3] * w[a[3]];
}

std::vector<double> StencilTable::values(std::span<const double> w) const {
    std::vector<double> out(size());
    simd::kernels().stencil_values(size(), atoms_.data(), patterns_.data(), coef_table_, w.data(), out.data());
    return out;
}

Stencil StencilTable::stencil(std::size_t s, const LatticeModel& model) const {
    const AtomId& center = model.atom(static_cast<std::size_t>(centers_[s]));
    switch (kinds_[s]) {
        case StencilKind::Z: return z_stencil(model.basis(), center, var_i_[s], var_j_[s]);
        case StencilKind::C: return c_stencil(model.basis(), center, var_i_[s], var_j_[s]);
        default: return s_stencil(model.basis(), center);
    }
}

StencilTable enumerate_stencils(const LatticeModel& model) {
    StencilTable table(model.ell());
    const LatticeBasis& basis = model.basis();

    auto try_push = [&](const Stencil& st, std::int32_t center, std::uint8_t pattern, int i, int j) {
        std::array<std::int32_t, 4> resolved{};
        bool touches_free = false;
        for (int k = 0; k < 4; ++k) {
            const std::int32_t idx = model.find(st.entries[k].atom);
            if (idx < 0) return;
            resolved[k] = idx;
            touches_free = touches_free || model.is_free(static_cast<std::size_t>(idx));
        }
        if (!touches_free) return;
        table.push(st, resolved, center, pattern, static_cast<std::int8_t>(i), static_cast<std::int8_t>(j));
    };

    for (std::size_t a = 0; a < model.size(); ++a) {
        const AtomId& id = model.atom(a);
        const auto center = static_cast<std::int32_t>(a);
        if (id.m == 1) {
            for (int i = 1; i <= 3; ++i) {
                try_push(z_stencil(basis, id, i, wrap3(i + 1)), center, StencilTable::kPatternZ, i, wrap3(i + 1));
                try_push(z_stencil(basis, id, i, wrap3(i + 2)), center, StencilTable::kPatternZ, i, wrap3(i + 2));
            }
            for (int i = 1; i <= 3; ++i) {
                try_push(c_stencil(basis, id, i, 1), center, StencilTable::kPatternCPlus, i, 1);
                try_push(c_stencil(basis, id, i, -1), center, StencilTable::kPatternCMinus, i, -1);
            }
        }
        try_push(s_stencil(basis, id), center, StencilTable::kPatternS, 0, 0);
    }
    return table;
}

void write_stencil_csv(std::ostream& out, const StencilTable& table, const LatticeModel& model) {
    out << "kind,center_n1,center_n2,center_m,variant_i,variant_j";
    for (int k = 1; k <= 4; ++k) out << ",a" << k << "_n1,a" << k << "_n2,a" << k << "_m,a" << k << "_coef";
    out << '\n';
    char buf[64];
    for (std::size_t s = 0; s < table.size(); ++s) {
        const Stencil st = table.stencil(s, model);
        out << to_string(st.kind) << ',' << st.center.n1 << ',' << st.center.n2 << ',' << st.center.m << ',' << st.i
            << ',' << st.j;
        for (const auto& e : st.entries) {
            std::snprintf(buf, sizeof(buf), "%.17g", e.coef);
            out << ',' << e.atom.n1 << ',' << e.atom.n2 << ',' << e.atom.m << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace hexbend
