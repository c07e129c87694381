// Compiled with -mavx2 -mfma; only reached after a runtime CPUID check.
#include <immintrin.h>

#include "hexbend/kernels.hpp"

namespace hexbend::simd {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpby_avx2(const double* x, double b, double* y, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void hadamard_avx2(const double* d, const double* r, double* z, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(r + i)));
    }
    for (; i < n; ++i) z[i] = d[i] * r[i];
}

void spmv_avx2(std::size_t row_begin, std::size_t row_end, const std::int64_t* row_ptr, const std::int32_t* cols,
               const double* vals, const double* x, double* y) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
        std::int64_t k = row_ptr[r];
        const std::int64_t end = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
        }
        double s = hsum(acc);
        for (; k < end; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

void stencil_values_avx2(std::size_t n, const std::array<std::int32_t, 4>* atoms, const std::uint8_t* patterns,
                         const std::array<std::array<double, 4>, 4>& coef_table, const double* w, double* out) {
    const double* coef = coef_table[0].data();
    std::size_t s = 0;
    for (; s + 4 <= n; s += 4) {
        // rows: the four atoms of stencils s..s+3; transpose to per-entry columns
        __m128 r0 = _mm_castsi128_ps(_mm_loadu_si128(reinterpret_cast<const __m128i*>(atoms[s].data())));
        __m128 r1 = _mm_castsi128_ps(_mm_loadu_si128(reinterpret_cast<const __m128i*>(atoms[s + 1].data())));
        __m128 r2 = _mm_castsi128_ps(_mm_loadu_si128(reinterpret_cast<const __m128i*>(atoms[s + 2].data())));
        __m128 r3 = _mm_castsi128_ps(_mm_loadu_si128(reinterpret_cast<const __m128i*>(atoms[s + 3].data())));
        _MM_TRANSPOSE4_PS(r0, r1, r2, r3);
        const __m128i base = _mm_slli_epi32(
            _mm_setr_epi32(patterns[s], patterns[s + 1], patterns[s + 2], patterns[s + 3]), 2);

        const __m128i cols[4] = {_mm_castps_si128(r0), _mm_castps_si128(r1), _mm_castps_si128(r2),
                                 _mm_castps_si128(r3)};
        __m256d acc = _mm256_setzero_pd();
        for (int k = 0; k < 4; ++k) {
            const __m256d wv = _mm256_i32gather_pd(w, cols[k], 8);
            const __m256d cv = _mm256_i32gather_pd(coef, _mm_add_epi32(base, _mm_set1_epi32(k)), 8);
            acc = _mm256_fmadd_pd(cv, wv, acc);
        }
        _mm256_storeu_pd(out + s, acc);
    }
    for (; s < n; ++s) {
        const auto& c = coef_table[patterns[s]];
        const auto& a = atoms[s];
        out[s] = c[0] * w[a[0]] + c[1] * w[a[1]] + c[2] * w[a[2]] + c[3] * w[a[3]];
    }
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{Isa::Avx2,  dot_avx2,  axpy_avx2,          xpby_avx2,
                                   hadamard_avx2, spmv_avx2, stencil_values_avx2};
    return table;
}

}  // namespace hexbend::simd
