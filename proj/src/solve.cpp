#include "hexbend/solve.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "hexbend/continuum.hpp"
#include "hexbend/errors.hpp"
#include "hexbend/kernels.hpp"

namespace hexbend {

LoadSpec LoadSpec::uniform(double f) {
    return {[f](const Vec2&) { return f; }};
}

NodalField load_vector(const LatticeModel& model, const LoadSpec& load) {
    const double area = model.cell_area();
    NodalField b(model.size(), 0.0);
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (model.is_free(i)) b[i] = load.density(model.pos(i)) * area;
    }
    return b;
}

MinimizeResult minimize(const QuadraticEnergy& q, const NodalField& load, const CgOptions& opt,
                        const NodalField& guess) {
    const std::vector<double> b = q.restrict_field(load);
    const std::vector<double> diag = q.matrix().diagonal();
    for (std::size_t d = 0; d < diag.size(); ++d) {
        if (!(diag[d] > 0.0)) throw SingularOperator("zero diagonal at degree of freedom " + std::to_string(d));
    }
    std::vector<double> x = guess.empty() ? std::vector<double>(b.size(), 0.0) : q.restrict_field(guess);
    MinimizeResult r;
    r.cg = conjugate_gradient([&q](std::span<const double> u, std::span<double> y) { q.apply_dofs(u, y); }, diag, b,
                              x, opt);
    r.w = q.extend(x);
    return r;
}

double objective(const QuadraticEnergy& q, const NodalField& w, const NodalField& load) {
    const std::vector<double> f = q.restrict_field(load);
    const std::vector<double> u = q.restrict_field(w);
    return energy_of(q, w).total - simd::kernels().dot(f.data(), u.data(), u.size());
}

double PlateReference::operator()(const Vec2& x) const {
    const Vec2 d = x - center;
    const double r2 = dot(d, d);
    if (r2 >= a * a) return 0.0;
    const double s = a * a - r2;
    return f * s * s / (64.0 * A);
}

PlateReference plate_reference(Vec2 center, double radius, double f, const MaterialParams& mat) {
    const ContinuumParams c = ContinuumParams::from(mat);
    if (!(c.A > 0.0)) throw PreconditionViolated("plate coefficient A must be positive");
    if (!(radius > 0.0)) throw PreconditionViolated("plate radius must be positive");
    return {center, radius, f, c.A};
}

void write_solution_csv(std::ostream& out, const LatticeModel& model, const NodalField& w) {
    out << "x,y,w\n";
    char buf[96];
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!model.is_free(i)) continue;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", model.pos(i).x, model.pos(i).y, w[i]);
        out << buf;
    }
}

}  // namespace hexbend
