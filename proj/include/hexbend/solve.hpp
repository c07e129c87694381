#pragma once

#include <functional>
#include <iosfwd>

#include "hexbend/cg.hpp"
#include "hexbend/energy.hpp"

namespace hexbend {

/// Transverse force per unit area.
struct LoadSpec {
    std::function<double(const Vec2&)> density;

    static LoadSpec uniform(double f);
};

/// (f_l)_a = f(x_a) * cell_area on free atoms, 0 on fixed atoms.
NodalField load_vector(const LatticeModel& model, const LoadSpec& load);

struct MinimizeResult {
    NodalField w;
    CgReport cg;
};

/// Solves K w = f on the free DOFs by diagonally preconditioned CG.  `guess`
/// (a nodal field) may be empty.  Throws SingularOperator on a zero diagonal
/// entry and CGNotConverged.
MinimizeResult minimize(const QuadraticEnergy& q, const NodalField& load, const CgOptions& opt = {},
                        const NodalField& guess = {});

/// 1/2 w.Kw - f.w
double objective(const QuadraticEnergy& q, const NodalField& w, const NodalField& load);

/// Clamped circular plate under uniform load, A Lap^2 w = f:
/// w(r) = f (a^2 - r^2)^2 / (64 A).
struct PlateReference {
    Vec2 center;
    double a = 1.0;
    double f = 0.0;
    double A = 1.0;

    double operator()(const Vec2& x) const;
    double center_deflection() const { return f * a * a * a * a / (64.0 * A); }
};

PlateReference plate_reference(Vec2 center, double radius, double f, const MaterialParams& mat);

/// "x,y,w" per free atom.
void write_solution_csv(std::ostream& out, const LatticeModel& model, const NodalField& w);

}  // namespace hexbend
