#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "hexbend/lattice.hpp"
#include "hexbend/stencils.hpp"

namespace hexbend {

/// Bending stiffnesses.  Requires kZ > 0, kC >= 0, tau0 <= 0.
struct MaterialParams {
    double kZ = 1.0;
    double kC = 0.0;
    double tau0 = 0.0;

    /// tau0 = -ktheta * dtheta0.
    static MaterialParams from_wedge(double kZ, double kC, double ktheta, double dtheta0);
    /// Throws InvalidMaterial.
    void validate() const;
};

/// Out-of-plane displacement over every enumerated atom; fixed atoms hold 0.
using NodalField = std::vector<double>;

/// Samples f at every free atom and writes 0 at fixed atoms.
NodalField sample(const LatticeModel& model, const std::function<double(const Vec2&)>& f);
/// Samples f on sublattice L1 and f + g on L2 (free atoms only).
NodalField sample_shifted(const LatticeModel& model, const std::function<double(const Vec2&)>& f,
                          const std::function<double(const Vec2&)>& g);

/// Compressed sparse row matrix; column indices sorted within each row.
struct CsrMatrix {
    std::size_t n = 0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> cols;
    std::vector<double> vals;

    std::size_t nnz() const { return cols.size(); }
    /// y = A x, split over simd::threads() row blocks.
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> diagonal() const;
    /// Largest absolute row sum (infinity norm).
    double norm_inf() const;
};

struct EnergyParts {
    double total = 0.0;
    double z_part = 0.0;
    double c_part = 0.0;
    double s_part = 0.0;
};

/// U(w) = 1/2 w^T K w on the free degrees of freedom, with K = kZ*Kz + kC*Kc + (-tau0)*Ks.
class QuadraticEnergy {
public:
    enum Part { kZPart = 0, kCPart = 1, kSPart = 2 };

    QuadraticEnergy() = default;

    std::size_t dofs() const { return K_.n; }
    std::size_t atom_count() const { return dof_of_atom_.size(); }
    const MaterialParams& material() const { return mat_; }

    const CsrMatrix& matrix() const { return K_; }
    /// Unit-stiffness part matrix (same sparsity as matrix()).
    CsrMatrix part(Part p) const;
    std::span<const double> part_values(Part p) const { return parts_[p]; }

    /// Free-DOF vector of a nodal field; DimensionMismatch on size mismatch.
    std::vector<double> restrict_field(std::span<const double> w) const;
    /// Nodal field (zeros at fixed atoms) from a free-DOF vector.
    NodalField extend(std::span<const double> u) const;

    /// K u on free-DOF vectors.
    void apply_dofs(std::span<const double> u, std::span<double> out) const;

    friend QuadraticEnergy assemble(const LatticeModel& model, const StencilTable& table, const MaterialParams& mat);

private:
    MaterialParams mat_;
    CsrMatrix K_;
    std::vector<double> parts_[3];
    std::vector<std::int32_t> dof_of_atom_;
    std::vector<std::int32_t> dof_atoms_;
};

/// Throws InvalidMaterial.
QuadraticEnergy assemble(const LatticeModel& model, const StencilTable& table, const MaterialParams& mat);

/// Energy of a nodal field through the assembled matrices.
EnergyParts energy_of(const QuadraticEnergy& q, std::span<const double> w);

/// K w as a nodal field (zero at fixed atoms).
NodalField apply_K(const QuadraticEnergy& q, std::span<const double> w);

/// Reference energy: squared stencil values summed one by one, fixed atoms read as 0.
EnergyParts stencil_energy(const LatticeModel& model, const StencilTable& table, const MaterialParams& mat,
                           std::span<const double> w);

/// Coordinate text format, one "row col value" line per stored entry (0-based).
void write_matrix_coo(std::ostream& out, const CsrMatrix& m);

}  // namespace hexbend
