#include <doctest.h>

#include <cmath>
#include <random>

#include "hexbend/kernels.hpp"
#include "hexbend/stencils.hpp"

using namespace hexbend;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

bool have_avx2() {
#if defined(HEXBEND_HAVE_AVX2)
    return simd::detected_isa() == simd::Isa::Avx2;
#else
    return false;
#endif
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels against plain loops") {
    const auto& s = simd::scalar_kernels();
    const auto x = random_vec(17, 1), y = random_vec(17, 2);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += x[i] * y[i];
    CHECK(s.dot(x.data(), y.data(), x.size()) == doctest::Approx(d).epsilon(1e-15));
    auto z = y;
    s.axpy(0.5, x.data(), z.data(), z.size());
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == doctest::Approx(y[i] + 0.5 * x[i]).epsilon(1e-15));
    z = y;
    s.xpby(x.data(), -2.0, z.data(), z.size());
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == doctest::Approx(x[i] - 2.0 * y[i]).epsilon(1e-15));
    s.hadamard(x.data(), y.data(), z.data(), z.size());
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == x[i] * y[i]);
}

TEST_CASE("AVX2 variants agree with the scalar reference, including ragged tails") {
    if (!have_avx2()) {
        MESSAGE("AVX2 not available, skipping");
        return;
    }
#if defined(HEXBEND_HAVE_AVX2)
    const auto& s = simd::scalar_kernels();
    const auto& v = simd::avx2_kernels();
    CHECK(v.isa == simd::Isa::Avx2);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 33u, 1001u}) {
        const auto x = random_vec(n, 10 + n), y = random_vec(n, 20 + n);
        double scale = 1e-300;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);
        CHECK(std::abs(s.dot(x.data(), y.data(), n) - v.dot(x.data(), y.data(), n)) <= 1e-14 * scale);
        auto a = y, b = y;
        s.axpy(0.3, x.data(), a.data(), n);
        v.axpy(0.3, x.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15 * (std::abs(a[i]) + 1.0));
        a = y;
        b = y;
        s.xpby(x.data(), 0.7, a.data(), n);
        v.xpby(x.data(), 0.7, b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15 * (std::abs(a[i]) + 1.0));
        s.hadamard(x.data(), y.data(), a.data(), n);
        v.hadamard(x.data(), y.data(), b.data(), n);
        CHECK(a == b);
    }

    // Random sparse matrix with uneven row lengths.
    const std::size_t rows = 211;
    std::mt19937_64 rng(4);
    std::vector<std::int64_t> rp{0};
    std::vector<std::int32_t> cols;
    std::vector<double> vals;
    for (std::size_t r = 0; r < rows; ++r) {
        const int len = static_cast<int>(rng() % 23);
        for (int k = 0; k < len; ++k) {
            cols.push_back(static_cast<std::int32_t>(rng() % rows));
            vals.push_back(static_cast<double>(rng() % 1000) / 997.0 - 0.5);
        }
        rp.push_back(static_cast<std::int64_t>(cols.size()));
    }
    const auto x = random_vec(rows, 99);
    std::vector<double> ya(rows), yb(rows);
    s.spmv(0, rows, rp.data(), cols.data(), vals.data(), x.data(), ya.data());
    v.spmv(0, rows, rp.data(), cols.data(), vals.data(), x.data(), yb.data());
    for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(ya[r] - yb[r]) <= 1e-14 * (1.0 + std::abs(ya[r])));

    const double ell = 0.05;
    const LatticeModel m = build_lattice(build_basis(ell), Region::disc({0.0, 0.0}, 0.5), ell);
    const StencilTable t = enumerate_stencils(m);
    const auto w = random_vec(m.size(), 7);
    std::vector<double> sa(t.size()), sb(t.size());
    s.stencil_values(t.size(), t.atom_rows().data(), t.pattern_ids().data(), t.coef_table(), w.data(), sa.data());
    v.stencil_values(t.size(), t.atom_rows().data(), t.pattern_ids().data(), t.coef_table(), w.data(), sb.data());
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(sa[k] - sb[k]) <= 1e-14 / ell);
#endif
}

TEST_CASE("isa selection") {
    const simd::Isa before = simd::active_isa();
    simd::set_isa(simd::Isa::Scalar);
    CHECK(simd::kernels().isa == simd::Isa::Scalar);
    CHECK(simd::to_string(simd::Isa::Scalar) == "scalar");
    simd::set_isa(before);
    CHECK(simd::active_isa() == before);
}

}
