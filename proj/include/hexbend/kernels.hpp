#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

// Inner loops of the solver and the stencil evaluator.  Each kernel has a
// scalar reference implementation and an AVX2 variant; the variant is picked
// at runtime from CPUID and can be forced with set_isa() or HEXBEND_ISA=scalar.

namespace hexbend::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    /// y = x + b * y
    void (*xpby)(const double* x, double b, double* y, std::size_t n);
    /// z = d .* r
    void (*hadamard)(const double* d, const double* r, double* z, std::size_t n);
    /// y[r] = sum_k vals[k] * x[cols[k]] for rows [row_begin, row_end)
    void (*spmv)(std::size_t row_begin, std::size_t row_end, const std::int64_t* row_ptr, const std::int32_t* cols,
                 const double* vals, const double* x, double* y);
    /// out[s] = sum_k coef_table[pattern[s]][k] * w[atoms[s][k]]
    void (*stencil_values)(std::size_t n, const std::array<std::int32_t, 4>* atoms, const std::uint8_t* patterns,
                           const std::array<std::array<double, 4>, 4>& coef_table, const double* w, double* out);
};

const KernelTable& scalar_kernels();
/// Only valid when the CPU supports AVX2 and FMA.
const KernelTable& avx2_kernels();

Isa detected_isa();
Isa active_isa();
void set_isa(Isa isa);
const KernelTable& kernels();

/// Worker count for row-parallel matrix-vector products (default 1).  Row
/// results do not depend on the split, so output is identical for any count.
void set_threads(int n);
int threads();

}  // namespace hexbend::simd
