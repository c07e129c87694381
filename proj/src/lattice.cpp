#include "hexbend/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hexbend/errors.hpp"

namespace hexbend {

Box bounding_union(const Box& a, const Box& b) {
    return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
            {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

Box intersect(const Box& a, const Box& b) {
    return {{std::max(a.lo.x, b.lo.x), std::max(a.lo.y, b.lo.y)},
            {std::min(a.hi.x, b.hi.x), std::min(a.hi.y, b.hi.y)}};
}

namespace {

int wrap3(int i) { return ((i - 1) % 3 + 3) % 3 + 1; }

std::string to_string(const AtomId& a) {
    return "(" + std::to_string(a.n1) + "," + std::to_string(a.n2) + "," + std::to_string(a.m) + ")";
}

}  // namespace

const Vec2& LatticeBasis::bond(int i) const {
    switch (wrap3(i)) {
        case 1: return p1;
        case 2: return p2;
        default: return p3;
    }
}

LatticeBasis build_basis(double ell) {
    const double s3 = std::sqrt(3.0);
    LatticeBasis b;
    b.ell = ell;
    b.d1 = {s3, 0.0};
    b.d2 = {s3 / 2.0, 1.5};
    b.p = {s3 / 2.0, 0.5};
    b.p1 = b.d1 - b.p;
    b.p2 = b.d2 - b.p;
    b.p3 = -b.p;
    b.d3 = b.d2 - b.d1;
    return b;
}

LatticeOffset bond_offset(int i) {
    switch (wrap3(i)) {
        case 1: return {1, 0, -1};
        case 2: return {0, 1, -1};
        default: return {0, 0, -1};
    }
}

Vec2 position(const LatticeBasis& basis, const AtomId& a) {
    const double l = basis.ell;
    return a.n1 * l * basis.d1 + a.n2 * l * basis.d2 + a.m * l * basis.p;
}

Region Region::rectangle(Vec2 center, Vec2 half_extents) {
    if (!(half_extents.x > 0.0 && half_extents.y > 0.0)) {
        throw std::invalid_argument("rectangle half extents must be positive");
    }
    Region r;
    r.kind = Kind::Rectangle;
    r.center = center;
    r.half_extents = half_extents;
    return r;
}

Region Region::disc(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
    Region r;
    r.kind = Kind::Disc;
    r.center = center;
    r.radius = radius;
    return r;
}

bool Region::contains(const Vec2& x) const {
    const Vec2 d = x - center;
    if (kind == Kind::Rectangle) return std::abs(d.x) < half_extents.x && std::abs(d.y) < half_extents.y;
    return dot(d, d) < radius * radius;
}

Box Region::bounding_box() const {
    const Vec2 h = kind == Kind::Rectangle ? half_extents : Vec2{radius, radius};
    return {center - h, center + h};
}

double Region::diameter() const {
    return kind == Kind::Rectangle ? 2.0 * norm(half_extents) : 2.0 * radius;
}

double Region::area() const {
    return kind == Kind::Rectangle ? 4.0 * half_extents.x * half_extents.y : M_PI * radius * radius;
}

LatticeModel::LatticeModel(const LatticeBasis& basis, const Region& region, double ell)
    : basis_(basis), region_(region) {
    if (!(ell > 0.0)) throw std::invalid_argument("lattice size must be positive");
    basis_.ell = ell;

    const Box box = region.bounding_box().padded(kEnumerationPadding * ell);
    const double s3 = std::sqrt(3.0);
    // y = ell*(1.5*n2 + 0.5*m), x = ell*(sqrt3*n1 + sqrt3/2*(n2 + m))
    const int n2_lo = static_cast<int>(std::floor((box.lo.y / ell - 0.5) / 1.5)) - 1;
    const int n2_hi = static_cast<int>(std::ceil(box.hi.y / ell / 1.5)) + 1;
    const int n1_lo = static_cast<int>(std::floor(box.lo.x / (s3 * ell) - 0.5 * (n2_hi + 1))) - 1;
    const int n1_hi = static_cast<int>(std::ceil(box.hi.x / (s3 * ell) - 0.5 * n2_lo)) + 1;

    n1_lo_ = n1_lo;
    n1_count_ = n1_hi - n1_lo + 1;
    n2_lo_ = n2_lo;
    n2_count_ = n2_hi - n2_lo + 1;
    lookup_.assign(static_cast<std::size_t>(n1_count_) * n2_count_ * 2, -1);

    for (int n1 = n1_lo; n1 <= n1_hi; ++n1) {
        for (int n2 = n2_lo; n2 <= n2_hi; ++n2) {
            for (int m = 0; m < 2; ++m) {
                const AtomId a{n1, n2, m};
                const Vec2 x = position(basis_, a);
                if (!box.contains(x)) continue;
                const std::size_t slot = (static_cast<std::size_t>(n1 - n1_lo) * n2_count_ + (n2 - n2_lo)) * 2 + m;
                lookup_[slot] = static_cast<std::int32_t>(atoms_.size());
                atoms_.push_back(a);
                positions_.push_back(x);
            }
        }
    }

    free_mask_.resize(atoms_.size());
    dof_of_atom_.assign(atoms_.size(), -1);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Triangle t = dual_triangle(basis_, atoms_[i]);
        const bool inside = region.contains(t[0]) && region.contains(t[1]) && region.contains(t[2]);
        free_mask_[i] = inside ? 1 : 0;
        if (inside) {
            dof_of_atom_[i] = static_cast<std::int32_t>(dof_atoms_.size());
            dof_atoms_.push_back(static_cast<std::int32_t>(i));
        }
    }
}

double LatticeModel::cell_area() const {
    return 3.0 * std::sqrt(3.0) * ell() * ell() / 4.0;
}

std::int32_t LatticeModel::find(const AtomId& a) const {
    if (a.m < 0 || a.m > 1) return -1;
    const int i1 = a.n1 - n1_lo_;
    const int i2 = a.n2 - n2_lo_;
    if (i1 < 0 || i1 >= n1_count_ || i2 < 0 || i2 >= n2_count_) return -1;
    return lookup_[(static_cast<std::size_t>(i1) * n2_count_ + i2) * 2 + a.m];
}

std::int32_t LatticeModel::index_of(const AtomId& a) const {
    const std::int32_t i = find(a);
    if (i < 0) throw UnknownAtom("atom " + to_string(a) + " is not enumerated");
    return i;
}

std::size_t LatticeModel::nearest(const Vec2& x) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        const Vec2 d = positions_[i] - x;
        const double dd = dot(d, d);
        if (dd < best_d) {
            best_d = dd;
            best = i;
        }
    }
    return best;
}

LatticeModel build_lattice(const LatticeBasis& basis, const Region& region, double ell) {
    LatticeModel model(basis, region, ell);
    if (model.free_count() == 0) {
        throw EmptyLattice("no atom has its dual triangle inside the region (ell = " + std::to_string(ell) + ")");
    }
    return model;
}

Triangle dual_triangle(const LatticeBasis& basis, const AtomId& a) {
    // Vertices are the centres of the three hexagons around the atom; they sit
    // opposite to the atom's bonds.
    const Vec2 c = position(basis, a);
    const double s = a.m == 0 ? basis.ell : -basis.ell;
    return {c + s * basis.p1, c + s * basis.p2, c + s * basis.p3};
}

Triangle dual_triangle(const LatticeModel& model, const AtomId& a) {
    model.index_of(a);
    return dual_triangle(model.basis(), a);
}

double triangle_area(const Triangle& t) {
    const Vec2 u = t[1] - t[0];
    const Vec2 v = t[2] - t[0];
    return 0.5 * std::abs(u.x * v.y - u.y * v.x);
}

}  // namespace hexbend
