#include "hexbend/cg.hpp"

#include <cmath>
#include <string>

#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"

namespace hexbend {

CgReport conjugate_gradient(const LinearOp& A, std::span<const double> diag, std::span<const double> b,
                            std::span<double> x, const CgOptions& opt) {
    const std::size_t n = b.size();
    if (x.size() != n || diag.size() != n) throw DimensionMismatch("conjugate_gradient: operand sizes differ");
    const auto& k = simd::kernels();
    CgReport rep;

    const double bnorm = std::sqrt(k.dot(b.data(), b.data(), n));
    if (bnorm == 0.0) {
        for (auto& v : x) v = 0.0;
        return rep;
    }

    std::vector<double> inv(n), r(n), z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / diag[i];

    auto residual = [&] {
        A(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
        return std::sqrt(k.dot(r.data(), r.data(), n)) / bnorm;
    };

    const std::size_t max_iter = opt.max_iter ? opt.max_iter : 10 * n + 100;
    double rel = residual();
    // Restart from the true residual whenever the recursive one says we are done.
    while (rel > opt.rel_tol) {
        k.hadamard(inv.data(), r.data(), z.data(), n);
        p = z;
        double rz = k.dot(r.data(), z.data(), n);
        bool converged_recursive = false;
        while (rep.iterations < max_iter) {
            A(p, q);
            const double pq = k.dot(p.data(), q.data(), n);
            if (!(pq > 0.0)) throw CGNotConverged("operator not positive definite along a search direction");
            const double alpha = rz / pq;
            k.axpy(alpha, p.data(), x.data(), n);
            k.axpy(-alpha, q.data(), r.data(), n);
            ++rep.iterations;
            const double rr = std::sqrt(k.dot(r.data(), r.data(), n)) / bnorm;
            if (rr <= 0.5 * opt.rel_tol) {
                converged_recursive = true;
                break;
            }
            k.hadamard(inv.data(), r.data(), z.data(), n);
            const double rz_new = k.dot(r.data(), z.data(), n);
            k.xpby(z.data(), rz_new / rz, p.data(), n);
            rz = rz_new;
        }
        rel = residual();
        if (!converged_recursive && rel > opt.rel_tol) {
            throw CGNotConverged("relative residual " + std::to_string(rel) + " after " +
                                 std::to_string(rep.iterations) + " iterations");
        }
    }
    rep.rel_residual = rel;
    return rep;
}

}  // namespace hexbend
