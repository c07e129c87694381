#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hexbend/energy.hpp"
#include "hexbend/fields.hpp"
#include "hexbend/lattice.hpp"

namespace hexbend {

/// Test field description:
///   {"type": "bump_poly", "center": [x, y], "radius": R, "terms": [[i, j, c], ...]}
///   {"type": "manufactured", "center": [x, y], "radius": R, "k": 10, "amp": a, "terms": [...]}
///   {"type": "zero"}
/// For "manufactured" the field is the w of the exact non-local pair and the
/// companion gamma is available through build_pair().
struct FieldConfig {
    std::string type = "bump_poly";
    Vec2 center{0.0, 0.0};
    double radius = 0.4;
    int k = 10;
    double amp = 1.0;
    std::vector<std::array<double, 3>> terms{{0, 0, 1.0}};

    FieldPtr build() const;
    /// Throws ConfigInvalid unless type is "manufactured".
    ManufacturedPair build_pair() const;
};

struct StudyConfig {
    std::string name;
    std::vector<double> ells;  // empty: default halving list
    int levels = 4;
    double load = 1.0;
    FieldConfig field;
    /// recovery_nonlocal: "manufactured" | "grid" | "zero"
    std::string gamma = "manufactured";
    /// Poisson grid cells per side, one entry per refinement level.
    std::vector<int> grid_cells{64, 128, 256};
};

struct OutputConfig {
    std::string dir = "out";
    double cg_tol = 1e-7;
    double poisson_tol = 1e-10;
    double quad_tol = 1e-9;
};

struct Config {
    MaterialParams material;
    Region domain;
    StudyConfig study;
    OutputConfig output;
    int threads = 1;

    /// The configuration with every default filled in.
    nlohmann::json effective() const;
};

/// Throws ConfigInvalid naming the offending field path.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

/// Lattice sizes of a study: the explicit list, or `levels` halvings from diameter/40.
std::vector<double> study_ells(const Config& c);

}  // namespace hexbend
