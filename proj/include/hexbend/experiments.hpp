#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hexbend/continuum.hpp"
#include "hexbend/energy.hpp"
#include "hexbend/fields.hpp"
#include "hexbend/nonlocal.hpp"
#include "hexbend/solve.hpp"

namespace hexbend {

/// Extrapolation of a sequence a(l_k) -> a(0) assuming a(l) = a0 + c l^q + ...
struct Extrapolation {
    double value = 0.0;
    int leading_order = 1;  // assumed order of the first elimination
    double observed_order = 0.0;
    int eliminations = 0;
};

/// Leading order from the last three entries (2 when the observed slope
/// exceeds 1.5, else 1), then repeated eliminations of orders q, q+1, ...
/// over the whole table.  ell must be strictly decreasing.
Extrapolation richardson(const std::vector<double>& ell, const std::vector<double>& values);
/// Limit of the finest eliminations+1 levels fitted to a0 + sum_m c_m l^(q+m), m < eliminations.
double richardson_fixed(const std::vector<double>& ell, const std::vector<double>& values, int first_order,
                        int eliminations);

/// Geometric list of `count` values from `first`, ratio 1/2.
std::vector<double> halving_list(double first, int count);

struct StudyRow {
    double ell = 0.0;
    double value = 0.0;      // discrete energy or error measure
    double reference = 0.0;  // continuum value
    std::size_t atoms = 0;
    std::size_t free = 0;

    double rel_deviation() const;
};

struct StudySummary {
    std::string study;
    std::vector<StudyRow> rows;
    Extrapolation extrapolation;
    double reference = 0.0;

    double relative_error() const;
    /// |deviation| non-increasing along the rows, allowing `slack` relative growth per step.
    bool deviations_decrease(double slack = 0.1) const;
};

/// Lattice domain for recovery studies: a disc enclosing the field supports.
Region recovery_region(const SmoothField& w, const SmoothField* gamma = nullptr, double margin = 0.05);

/// Discrete energy U_l(w_l) of plain sampling, all three parts.
EnergyParts sampled_energy(const SmoothField& w, const MaterialParams& mat, const Region& region, double ell);

/// Recovery sequence for the local limit: U_l(w_l) against U0b(w).
StudySummary recovery_local(const SmoothField& w, const MaterialParams& mat, const std::vector<double>& ells,
                            const Quadrature& q, const Region* region = nullptr);

/// Recovery sequence for the Z-limit: w on L1, w + 3/2 l gamma on L2, with
/// the plain sampling alongside.  References are supplied by the caller.
struct NonlocalRecovery {
    StudySummary shifted;  // with gamma
    StudySummary plain;    // gamma = 0
    /// Richardson limit of U(gamma) - U(0); more accurate than the
    /// difference of the separate limits because the leading errors cancel.
    Extrapolation difference;
};
NonlocalRecovery recovery_nonlocal(const SmoothField& w, const std::function<double(const Vec2&)>& gamma,
                                   double reference_shifted, double reference_plain, const MaterialParams& mat,
                                   const std::vector<double>& ells, const Region& region);

/// Per-level result of the clamped disc benchmark.
struct MinimizerRow {
    double ell = 0.0;
    double l2_error = 0.0;  // relative, cell-area weighted
    double center_deflection = 0.0;
    double ref_deflection = 0.0;
    std::size_t dofs = 0;
    std::size_t iterations = 0;
};

struct MinimizerStudy {
    std::vector<MinimizerRow> rows;
    StudySummary summary;  // rows of center deflection, reference f a^4 / (64 A)
};

/// `disc` must be a disc region; the load is uniform with density f.
MinimizerStudy minimizer_study(const MaterialParams& mat, const Region& disc, double f, const std::vector<double>& ells,
                               const CgOptions& opt = {});

/// Non-locality gap report for a kZ-only material.
struct GammaEffect {
    double uz_gamma0 = 0.0;     // Uz00(w, 0)
    double uz_gamma_h = 0.0;    // Uz00(w, gamma_h), discrete minimiser
    double gap = 0.0;           // uz_gamma0 - uz_gamma_h
    double grad_energy = 0.0;   // 3 sqrt(3) kZ |grad gamma_h|^2
    CgReport cg;
};
GammaEffect gamma_effect(const SmoothField& w, const MaterialParams& mat, const GridSpec& grid, const Quadrature& q,
                         const CgOptions& opt = {});

/// CSV "ell,value,reference,rel_deviation,atoms,free" plus a final row with
/// ell = 0 holding the extrapolated value.
void write_study_csv(std::ostream& out, const StudySummary& s);
/// CSV "ell,l2_error,center_deflection,ref_deflection" plus the ell = 0 row.
void write_minimizer_csv(std::ostream& out, const MinimizerStudy& s);

}  // namespace hexbend
