#include "hexbend/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"

namespace hexbend {

MaterialParams MaterialParams::from_wedge(double kZ, double kC, double ktheta, double dtheta0) {
    MaterialParams m{kZ, kC, -ktheta * dtheta0};
    m.validate();
    return m;
}

void MaterialParams::validate() const {
    if (!(kZ > 0.0)) throw InvalidMaterial("kZ must be positive, got " + std::to_string(kZ));
    if (!(kC >= 0.0)) throw InvalidMaterial("kC must be non-negative, got " + std::to_string(kC));
    if (!(tau0 <= 0.0)) throw InvalidMaterial("tau0 must be non-positive, got " + std::to_string(tau0));
}

NodalField sample(const LatticeModel& model, const std::function<double(const Vec2&)>& f) {
    NodalField w(model.size(), 0.0);
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (model.is_free(i)) w[i] = f(model.pos(i));
    }
    return w;
}

NodalField sample_shifted(const LatticeModel& model, const std::function<double(const Vec2&)>& f,
                          const std::function<double(const Vec2&)>& g) {
    NodalField w(model.size(), 0.0);
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!model.is_free(i)) continue;
        const Vec2& x = model.pos(i);
        w[i] = model.atom(i).m == 1 ? f(x) + g(x) : f(x);
    }
    return w;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const auto& k = simd::kernels();
    const int nt = std::min<int>(simd::threads(), static_cast<int>(n / 4096) + 1);
    if (nt <= 1) {
        k.spmv(0, n, row_ptr.data(), cols.data(), vals.data(), x.data(), y.data());
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] { k.spmv(b, e, row_ptr.data(), cols.data(), vals.data(), x.data(), y.data()); });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            if (static_cast<std::size_t>(cols[k]) == r) d[r] = vals[k];
        }
    }
    return d;
}

double CsrMatrix::norm_inf() const {
    double m = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += std::abs(vals[k]);
        m = std::max(m, s);
    }
    return m;
}

CsrMatrix QuadraticEnergy::part(Part p) const {
    CsrMatrix m;
    m.n = K_.n;
    m.row_ptr = K_.row_ptr;
    m.cols = K_.cols;
    m.vals = parts_[p];
    return m;
}

std::vector<double> QuadraticEnergy::restrict_field(std::span<const double> w) const {
    if (w.size() != dof_of_atom_.size()) {
        throw DimensionMismatch("field has " + std::to_string(w.size()) + " entries, lattice has " +
                                std::to_string(dof_of_atom_.size()) + " atoms");
    }
    std::vector<double> u(dof_atoms_.size());
    for (std::size_t d = 0; d < dof_atoms_.size(); ++d) u[d] = w[dof_atoms_[d]];
    return u;
}

NodalField QuadraticEnergy::extend(std::span<const double> u) const {
    if (u.size() != dof_atoms_.size()) {
        throw DimensionMismatch("vector has " + std::to_string(u.size()) + " entries, expected " +
                                std::to_string(dof_atoms_.size()) + " degrees of freedom");
    }
    NodalField w(dof_of_atom_.size(), 0.0);
    for (std::size_t d = 0; d < dof_atoms_.size(); ++d) w[dof_atoms_[d]] = u[d];
    return w;
}

void QuadraticEnergy::apply_dofs(std::span<const double> u, std::span<double> out) const {
    if (u.size() != K_.n || out.size() != K_.n) throw DimensionMismatch("apply_dofs: size mismatch");
    K_.multiply(u, out);
}

namespace {

int part_of(StencilKind k) {
    switch (k) {
        case StencilKind::Z: return QuadraticEnergy::kZPart;
        case StencilKind::C: return QuadraticEnergy::kCPart;
        default: return QuadraticEnergy::kSPart;
    }
}

double quad(const CsrMatrix& pattern, std::span<const double> vals, std::span<const double> u) {
    std::vector<double> y(pattern.n);
    simd::kernels().spmv(0, pattern.n, pattern.row_ptr.data(), pattern.cols.data(), vals.data(), u.data(), y.data());
    return 0.5 * simd::kernels().dot(u.data(), y.data(), u.size());
}

}  // namespace

QuadraticEnergy assemble(const LatticeModel& model, const StencilTable& table, const MaterialParams& mat) {
    mat.validate();
    QuadraticEnergy q;
    q.mat_ = mat;
    q.dof_of_atom_.resize(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) q.dof_of_atom_[i] = model.dof(i);
    q.dof_atoms_.assign(model.dof_atoms().begin(), model.dof_atoms().end());
    const std::size_t n = q.dof_atoms_.size();

    // Pass 1: sparsity pattern.
    std::vector<std::vector<std::int32_t>> rows(n);
    for (std::size_t s = 0; s < table.size(); ++s) {
        const auto& a = table.atoms(s);
        for (int k = 0; k < 4; ++k) {
            const std::int32_t r = q.dof_of_atom_[a[k]];
            if (r < 0) continue;
            for (int l = 0; l < 4; ++l) {
                const std::int32_t c = q.dof_of_atom_[a[l]];
                if (c >= 0) rows[r].push_back(c);
            }
        }
    }
    CsrMatrix& K = q.K_;
    K.n = n;
    K.row_ptr.assign(n + 1, 0);
    for (std::size_t r = 0; r < n; ++r) {
        auto& row = rows[r];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        K.row_ptr[r + 1] = K.row_ptr[r] + static_cast<std::int64_t>(row.size());
    }
    K.cols.reserve(K.row_ptr[n]);
    for (auto& row : rows) {
        K.cols.insert(K.cols.end(), row.begin(), row.end());
        std::vector<std::int32_t>().swap(row);
    }
    for (auto& p : q.parts_) p.assign(K.cols.size(), 0.0);

    // Pass 2: outer products c c^T in stencil order.
    auto slot = [&](std::int32_t r, std::int32_t c) {
        const auto b = K.cols.begin() + K.row_ptr[r];
        const auto e = K.cols.begin() + K.row_ptr[r + 1];
        return static_cast<std::size_t>(std::lower_bound(b, e, c) - K.cols.begin());
    };
    for (std::size_t s = 0; s < table.size(); ++s) {
        const auto& a = table.atoms(s);
        const auto& coef = table.coefs(s);
        auto& vals = q.parts_[part_of(table.kind(s))];
        for (int k = 0; k < 4; ++k) {
            const std::int32_t r = q.dof_of_atom_[a[k]];
            if (r < 0) continue;
            for (int l = 0; l < 4; ++l) {
                const std::int32_t c = q.dof_of_atom_[a[l]];
                if (c >= 0) vals[slot(r, c)] += coef[k] * coef[l];
            }
        }
    }

    K.vals.resize(K.cols.size());
    const double wz = mat.kZ, wc = mat.kC, ws = -mat.tau0;
    for (std::size_t k = 0; k < K.vals.size(); ++k) {
        K.vals[k] = wz * q.parts_[0][k] + wc * q.parts_[1][k] + ws * q.parts_[2][k];
    }
    return q;
}

EnergyParts energy_of(const QuadraticEnergy& q, std::span<const double> w) {
    const std::vector<double> u = q.restrict_field(w);
    const MaterialParams& m = q.material();
    const CsrMatrix& K = q.matrix();
    EnergyParts e;
    e.z_part = m.kZ * quad(K, q.part_values(QuadraticEnergy::kZPart), u);
    e.c_part = m.kC == 0.0 ? 0.0 : m.kC * quad(K, q.part_values(QuadraticEnergy::kCPart), u);
    e.s_part = m.tau0 == 0.0 ? 0.0 : -m.tau0 * quad(K, q.part_values(QuadraticEnergy::kSPart), u);
    e.total = e.z_part + e.c_part + e.s_part;
    return e;
}

NodalField apply_K(const QuadraticEnergy& q, std::span<const double> w) {
    const std::vector<double> u = q.restrict_field(w);
    std::vector<double> y(u.size());
    q.apply_dofs(u, y);
    return q.extend(y);
}

EnergyParts stencil_energy(const LatticeModel& model, const StencilTable& table, const MaterialParams& mat,
                           std::span<const double> w) {
    if (w.size() != model.size()) throw DimensionMismatch("stencil_energy: field size differs from lattice size");
    NodalField masked(w.begin(), w.end());
    for (std::size_t i = 0; i < masked.size(); ++i) {
        if (!model.is_free(i)) masked[i] = 0.0;
    }
    double sums[3] = {0.0, 0.0, 0.0};
    for (std::size_t s = 0; s < table.size(); ++s) {
        const double t = table.value(s, masked);
        sums[part_of(table.kind(s))] += t * t;
    }
    EnergyParts e;
    e.z_part = 0.5 * mat.kZ * sums[0];
    e.c_part = 0.5 * mat.kC * sums[1];
    e.s_part = -0.5 * mat.tau0 * sums[2];
    e.total = e.z_part + e.c_part + e.s_part;
    return e;
}

void write_matrix_coo(std::ostream& out, const CsrMatrix& m) {
    char buf[96];
    for (std::size_t r = 0; r < m.n; ++r) {
        for (std::int64_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%zu %d %.17g\n", r, m.cols[k], m.vals[k]);
            out << buf;
        }
    }
}

}  // namespace hexbend
