#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "hexbend/lattice.hpp"

namespace hexbend {

/// Z- and C-dihedral angle changes (centred on L2 sites) and the two
/// self-energy wedge stencils (S1 on L1 sites, S2 on L2 sites).
enum class StencilKind : std::uint8_t { Z = 0, C = 1, S1 = 2, S2 = 3 };

std::string_view to_string(StencilKind k);

struct StencilEntry {
    AtomId atom;
    double coef = 0.0;
};

/// One angle as a linear functional of nodal displacements.  Every stencil in
/// this model touches exactly four sites.
struct Stencil {
    StencilKind kind = StencilKind::Z;
    AtomId center;
    int i = 0;  // middle bond p_i (Z, C); unused for S
    int j = 0;  // partner bond for Z, +1/-1 orientation for C
    std::array<StencilEntry, 4> entries;

    double apply(const std::function<double(const Vec2&)>& w, const LatticeBasis& basis) const;
};

/// Z-dihedral angle with middle edge p_i and end edges parallel to p_j.
Stencil z_stencil(const LatticeBasis& basis, const AtomId& center, int i, int j);
/// C-dihedral angle with middle edge p_i, oriented along +p_i^perp (sign > 0) or opposite.
Stencil c_stencil(const LatticeBasis& basis, const AtomId& center, int i, int sign);
/// Second-order wedge variation at a site of either sublattice.
Stencil s_stencil(const LatticeBasis& basis, const AtomId& center);

/// Stencils resolved to contiguous atom indices of a LatticeModel.
///
/// Coefficients are shared per pattern: all Z stencils use the same four
/// coefficients (in resolved atom order), likewise C+, C- and S.
class StencilTable {
public:
    enum Pattern : std::uint8_t { kPatternZ = 0, kPatternCPlus = 1, kPatternCMinus = 2, kPatternS = 3 };

    StencilTable() = default;
    explicit StencilTable(double ell);

    std::size_t size() const { return atoms_.size(); }
    std::size_t count(StencilKind k) const { return counts_[static_cast<int>(k)]; }

    StencilKind kind(std::size_t s) const { return kinds_[s]; }
    std::uint8_t pattern(std::size_t s) const { return patterns_[s]; }
    const std::array<std::int32_t, 4>& atoms(std::size_t s) const { return atoms_[s]; }
    const std::array<double, 4>& coefs(std::size_t s) const { return coef_table_[patterns_[s]]; }
    std::int32_t center(std::size_t s) const { return centers_[s]; }

    std::span<const std::array<std::int32_t, 4>> atom_rows() const { return atoms_; }
    std::span<const std::uint8_t> pattern_ids() const { return patterns_; }
    const std::array<std::array<double, 4>, 4>& coef_table() const { return coef_table_; }

    /// Angle value of stencil s for a nodal field over all enumerated atoms.
    double value(std::size_t s, std::span<const double> w) const;
    /// All angle values (SIMD kernel).
    std::vector<double> values(std::span<const double> w) const;

    /// Materialised stencil with full atom labels.
    Stencil stencil(std::size_t s, const LatticeModel& model) const;

    void push(const Stencil& st, const std::array<std::int32_t, 4>& resolved, std::int32_t center, std::uint8_t pattern,
              std::int8_t i, std::int8_t j);

private:
    std::array<std::array<double, 4>, 4> coef_table_{};
    std::vector<StencilKind> kinds_;
    std::vector<std::uint8_t> patterns_;
    std::vector<std::int8_t> var_i_;
    std::vector<std::int8_t> var_j_;
    std::vector<std::int32_t> centers_;
    std::vector<std::array<std::int32_t, 4>> atoms_;
    std::array<std::size_t, 4> counts_{};
};

/// Every stencil whose atoms are all enumerated and which touches a free atom,
/// in (n1, n2, m, kind, variant) order.
StencilTable enumerate_stencils(const LatticeModel& model);

/// Debug dump: kind, centre triplet, variant, then four (triplet, coefficient) entries.
void write_stencil_csv(std::ostream& out, const StencilTable& table, const LatticeModel& model);

}  // namespace hexbend
