#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "hexbend/energy.hpp"
#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"
#include "hexbend/stencils.hpp"

using namespace hexbend;

namespace {

struct Fixture {
    double ell = 0.1;
    LatticeModel model = build_lattice(build_basis(0.1), Region::disc({0.05, 0.0}, 0.45), 0.1);
    StencilTable table = enumerate_stencils(model);
    MaterialParams mat{1.0, 0.5, -0.2};
};

/// Dense K over free atoms from the stencil definitions, one outer product at a time.
Eigen::MatrixXd dense_oracle(const Fixture& f) {
    const auto n = static_cast<Eigen::Index>(f.model.free_count());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t s = 0; s < f.table.size(); ++s) {
        const Stencil st = f.table.stencil(s, f.model);
        const double weight = st.kind == StencilKind::Z ? f.mat.kZ : st.kind == StencilKind::C ? f.mat.kC : -f.mat.tau0;
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        for (const auto& e : st.entries) {
            const auto d = f.model.dof(f.model.index_of(e.atom));
            if (d >= 0) c[d] += e.coef;
        }
        K += weight * c * c.transpose();
    }
    return K;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("material validation") {
    CHECK_NOTHROW(MaterialParams{1.0, 0.0, 0.0}.validate());
    CHECK_THROWS_AS((MaterialParams{0.0, 0.0, 0.0}.validate()), InvalidMaterial);
    CHECK_THROWS_AS((MaterialParams{1.0, -0.1, 0.0}.validate()), InvalidMaterial);
    CHECK_THROWS_AS((MaterialParams{1.0, 0.0, 0.1}.validate()), InvalidMaterial);
    CHECK(MaterialParams::from_wedge(1.0, 0.0, 2.0, 0.25).tau0 == doctest::Approx(-0.5));
}

TEST_CASE("assembled matrix equals the dense sum of stencil outer products") {
    Fixture f;
    const QuadraticEnergy q = assemble(f.model, f.table, f.mat);
    const Eigen::MatrixXd D = dense_oracle(f);
    const CsrMatrix& K = q.matrix();
    REQUIRE(K.n == static_cast<std::size_t>(D.rows()));
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(D.rows(), D.cols());
    for (std::size_t r = 0; r < K.n; ++r) {
        for (auto k = K.row_ptr[r]; k < K.row_ptr[r + 1]; ++k) {
            if (k > K.row_ptr[r]) CHECK(K.cols[k - 1] < K.cols[k]);
            S(r, K.cols[k]) = K.vals[k];
        }
    }
    CHECK((S - D).cwiseAbs().maxCoeff() <= 1e-12 * D.cwiseAbs().maxCoeff());
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() == 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * K.norm_inf());
}

TEST_CASE("energy through the matrix equals the stencil sum, part by part") {
    Fixture f;
    const QuadraticEnergy q = assemble(f.model, f.table, f.mat);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        NodalField w(f.model.size(), 0.0);
        for (std::size_t i = 0; i < w.size(); ++i)
            if (f.model.is_free(i)) w[i] = u(rng);
        const EnergyParts a = energy_of(q, w), b = stencil_energy(f.model, f.table, f.mat, w);
        CHECK(a.total == doctest::Approx(b.total).epsilon(1e-12));
        CHECK(a.z_part == doctest::Approx(b.z_part).epsilon(1e-12));
        CHECK(a.c_part == doctest::Approx(b.c_part).epsilon(1e-12));
        CHECK(a.s_part == doctest::Approx(b.s_part).epsilon(1e-12));
        CHECK(a.total == doctest::Approx(a.z_part + a.c_part + a.s_part).epsilon(1e-14));
    }
}

TEST_CASE("stiffness is kZ Kz + kC Kc - tau0 Ks") {
    Fixture f;
    const QuadraticEnergy q = assemble(f.model, f.table, f.mat);
    const auto z = q.part_values(QuadraticEnergy::kZPart), c = q.part_values(QuadraticEnergy::kCPart),
               s = q.part_values(QuadraticEnergy::kSPart);
    const auto& v = q.matrix().vals;
    for (std::size_t k = 0; k < v.size(); ++k) {
        CHECK(v[k] == doctest::Approx(f.mat.kZ * z[k] + f.mat.kC * c[k] - f.mat.tau0 * s[k]).epsilon(1e-14));
    }
    CHECK(q.part(QuadraticEnergy::kZPart).cols == q.matrix().cols);
}

TEST_CASE("energy is quadratic and fixed atoms are ignored") {
    Fixture f;
    const QuadraticEnergy q = assemble(f.model, f.table, f.mat);
    NodalField w(f.model.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = f.model.is_free(i) ? std::cos(7.0 * f.model.pos(i).x) : 0.0;
    const double e1 = energy_of(q, w).total;
    NodalField w3 = w;
    for (auto& x : w3) x *= 3.0;
    CHECK(energy_of(q, w3).total == doctest::Approx(9.0 * e1).epsilon(1e-13));
    NodalField noisy = w;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!f.model.is_free(i)) noisy[i] = 42.0;
    CHECK(energy_of(q, noisy).total == doctest::Approx(e1).epsilon(1e-15));
}

TEST_CASE("restrict and extend are inverse on free atoms") {
    Fixture f;
    const QuadraticEnergy q = assemble(f.model, f.table, f.mat);
    std::vector<double> u(q.dofs());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = 0.5 + k;
    const NodalField w = q.extend(u);
    CHECK(q.restrict_field(w) == u);
    CHECK_THROWS_AS(q.restrict_field(std::vector<double>(3)), DimensionMismatch);
    const NodalField Kw = apply_K(q, w);
    std::vector<double> Ku(q.dofs());
    q.apply_dofs(u, Ku);
    CHECK(q.restrict_field(Kw) == Ku);
}

TEST_CASE("matrix-vector product does not depend on the thread count") {
    Fixture f;
    const QuadraticEnergy q = assemble(f.model, f.table, f.mat);
    std::vector<double> x(q.dofs()), y1(q.dofs()), y3(q.dofs());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sin(0.1 * k);
    simd::set_threads(1);
    q.matrix().multiply(x, y1);
    simd::set_threads(3);
    q.matrix().multiply(x, y3);
    simd::set_threads(1);
    CHECK(y1 == y3);
}

TEST_CASE("sampling writes zero at fixed atoms and shifts only L2") {
    Fixture f;
    const NodalField a = sample(f.model, [](const Vec2&) { return 1.0; });
    const NodalField b = sample_shifted(f.model, [](const Vec2&) { return 1.0; }, [](const Vec2&) { return 2.0; });
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == (f.model.is_free(i) ? 1.0 : 0.0));
        CHECK(b[i] == (f.model.is_free(i) ? (f.model.atom(i).m == 1 ? 3.0 : 1.0) : 0.0));
    }
}

}
