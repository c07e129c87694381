#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hexbend {

struct CgOptions {
    double rel_tol = 1e-10;
    /// 0 selects 10 * n + 100.
    std::size_t max_iter = 0;
};

struct CgReport {
    std::size_t iterations = 0;
    double rel_residual = 0.0;
};

using LinearOp = std::function<void(std::span<const double> x, std::span<double> y)>;

/// Jacobi-preconditioned conjugate gradients for a symmetric positive definite
/// operator.  x holds the initial guess on entry.  The stopping test uses the
/// recomputed true residual ||b - A x|| / ||b||.  Throws CGNotConverged.
CgReport conjugate_gradient(const LinearOp& A, std::span<const double> diag, std::span<const double> b,
                            std::span<double> x, const CgOptions& opt);

}  // namespace hexbend
