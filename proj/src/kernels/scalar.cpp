#include "hexbend/kernels.hpp"

namespace hexbend::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void hadamard_scalar(const double* d, const double* r, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = d[i] * r[i];
}

void spmv_scalar(std::size_t row_begin, std::size_t row_end, const std::int64_t* row_ptr, const std::int32_t* cols,
                 const double* vals, const double* x, double* y) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
        double s = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

void stencil_values_scalar(std::size_t n, const std::array<std::int32_t, 4>* atoms, const std::uint8_t* patterns,
                           const std::array<std::array<double, 4>, 4>& coef_table, const double* w, double* out) {
    for (std::size_t s = 0; s < n; ++s) {
        const auto& c = coef_table[patterns[s]];
        const auto& a = atoms[s];
        out[s] = c[0] * w[a[0]] + c[1] * w[a[1]] + c[2] * w[a[2]] + c[3] * w[a[3]];
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::Scalar,  dot_scalar,  axpy_scalar,          xpby_scalar,
                                   hadamard_scalar, spmv_scalar, stencil_values_scalar};
    return table;
}

}  // namespace hexbend::simd
