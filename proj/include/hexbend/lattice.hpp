#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hexbend/geometry.hpp"

namespace hexbend {

/// Dimensionless honeycomb geometry; every vector is multiplied by `ell` on use.
///
/// d1, d2 generate the Bravais lattice L1, p shifts it onto L2, and the bonds
/// p1, p2, p3 point from an L2 atom to its three L1 neighbours.
struct LatticeBasis {
    double ell = 1.0;
    Vec2 d1, d2, d3;
    Vec2 p;
    Vec2 p1, p2, p3;

    /// Bond vector p_i for i in {1,2,3}; indices wrap cyclically.
    const Vec2& bond(int i) const;
};

LatticeBasis build_basis(double ell = 1.0);

/// Integer label (n1, n2, m) of a lattice site; m = 0 for L1, m = 1 for L2.
struct AtomId {
    int n1 = 0;
    int n2 = 0;
    int m = 0;

    friend constexpr bool operator==(const AtomId&, const AtomId&) = default;
};

/// Lattice offset a1*d1 + a2*d2 + b*p in integer coordinates.
struct LatticeOffset {
    int a1 = 0;
    int a2 = 0;
    int b = 0;
};

/// Offset of bond p_i, i in {1,2,3} (cyclic).
LatticeOffset bond_offset(int i);
constexpr LatticeOffset operator+(LatticeOffset u, LatticeOffset v) { return {u.a1 + v.a1, u.a2 + v.a2, u.b + v.b}; }
constexpr LatticeOffset operator-(LatticeOffset u, LatticeOffset v) { return {u.a1 - v.a1, u.a2 - v.a2, u.b - v.b}; }
constexpr LatticeOffset operator-(LatticeOffset u) { return {-u.a1, -u.a2, -u.b}; }

/// Shifted label; the sublattice flag may leave {0,1}, in which case the caller
/// has asked for a point that is not a lattice site.
constexpr AtomId shifted(const AtomId& a, const LatticeOffset& o) { return {a.n1 + o.a1, a.n2 + o.a2, a.m + o.b}; }

Vec2 position(const LatticeBasis& basis, const AtomId& a);

/// Open, bounded, simply connected domain: a rectangle or a disc.
struct Region {
    enum class Kind { Rectangle, Disc };

    Kind kind = Kind::Rectangle;
    Vec2 center;
    Vec2 half_extents;  // rectangle
    double radius = 0.0;  // disc

    static Region rectangle(Vec2 center, Vec2 half_extents);
    static Region disc(Vec2 center, double radius);

    bool contains(const Vec2& x) const;
    Box bounding_box() const;
    double diameter() const;
    double area() const;
};

using Triangle = std::array<Vec2, 3>;

/// Honeycomb sites enumerated over a padded bounding box of a region, with the
/// free/fixed partition of the clamped admissible set.
class LatticeModel {
public:
    LatticeModel(const LatticeBasis& basis, const Region& region, double ell);

    const LatticeBasis& basis() const { return basis_; }
    const Region& region() const { return region_; }
    double ell() const { return basis_.ell; }
    double cell_area() const;

    std::size_t size() const { return atoms_.size(); }
    std::size_t free_count() const { return dof_atoms_.size(); }

    std::span<const AtomId> atoms() const { return atoms_; }
    std::span<const Vec2> positions() const { return positions_; }
    const AtomId& atom(std::size_t i) const { return atoms_[i]; }
    const Vec2& pos(std::size_t i) const { return positions_[i]; }
    bool is_free(std::size_t i) const { return free_mask_[i] != 0; }
    std::span<const std::uint8_t> free_mask() const { return free_mask_; }

    /// Contiguous index of an atom, or -1 when it was not enumerated.
    std::int32_t find(const AtomId& a) const;
    /// Like find() but throws UnknownAtom.
    std::int32_t index_of(const AtomId& a) const;

    /// Degree-of-freedom number of atom i, or -1 for fixed atoms.
    std::int32_t dof(std::size_t i) const { return dof_of_atom_[i]; }
    std::span<const std::int32_t> dof_atoms() const { return dof_atoms_; }

    /// Nearest enumerated atom to x (brute force).
    std::size_t nearest(const Vec2& x) const;

private:
    LatticeBasis basis_;
    Region region_;
    std::vector<AtomId> atoms_;
    std::vector<Vec2> positions_;
    std::vector<std::uint8_t> free_mask_;
    std::vector<std::int32_t> dof_of_atom_;
    std::vector<std::int32_t> dof_atoms_;

    int n1_lo_ = 0, n1_count_ = 0;
    int n2_lo_ = 0, n2_count_ = 0;
    std::vector<std::int32_t> lookup_;
};

/// Enumerates the lattice and marks atoms whose dual triangle lies inside the
/// region as free.  Throws EmptyLattice when nothing is free.
LatticeModel build_lattice(const LatticeBasis& basis, const Region& region, double ell);

/// Equilateral dual triangle of side sqrt(3)*ell centred at an atom.
Triangle dual_triangle(const LatticeModel& model, const AtomId& a);
Triangle dual_triangle(const LatticeBasis& basis, const AtomId& a);

double triangle_area(const Triangle& t);

/// Padding (in units of ell) added around the region's bounding box.
inline constexpr double kEnumerationPadding = 3.0;

}  // namespace hexbend
