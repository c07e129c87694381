#include "hexbend/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hexbend/errors.hpp"

namespace hexbend {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) { throw ConfigInvalid(path + ": " + what); }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) invalid(path, "expected an object");
    std::set<std::string> allowed;
    for (const char* k : keys) allowed.insert(k);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) invalid(path + "." + it.key(), "unknown key");
    }
}

double number(const json& obj, const std::string& key, const std::string& path, std::optional<double> def = {}) {
    if (!obj.contains(key)) {
        if (def) return *def;
        invalid(path + "." + key, "required field missing");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) invalid(path + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) invalid(path + "." + key, "must be finite");
    return d;
}

int integer(const json& obj, const std::string& key, const std::string& path, int def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) invalid(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& path, std::optional<std::string> def = {}) {
    if (!obj.contains(key)) {
        if (def) return *def;
        invalid(path + "." + key, "required field missing");
    }
    if (!obj.at(key).is_string()) invalid(path + "." + key, "expected a string");
    return obj.at(key).get<std::string>();
}

Vec2 vec2(const json& obj, const std::string& key, const std::string& path, std::optional<Vec2> def = {}) {
    if (!obj.contains(key)) {
        if (def) return *def;
        invalid(path + "." + key, "required field missing");
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        invalid(path + "." + key, "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

json to_json(Vec2 v) { return json::array({v.x, v.y}); }

FieldConfig parse_field(const json& j, const std::string& path) {
    only_keys(j, path, {"type", "center", "radius", "k", "amp", "terms"});
    FieldConfig f;
    f.type = text(j, "type", path, f.type);
    if (f.type != "bump_poly" && f.type != "manufactured" && f.type != "zero") {
        invalid(path + ".type", "expected bump_poly, manufactured or zero");
    }
    f.center = vec2(j, "center", path, f.center);
    f.radius = number(j, "radius", path, f.radius);
    if (!(f.radius > 0.0)) invalid(path + ".radius", "must be positive");
    f.k = integer(j, "k", path, f.k);
    if (f.k < 4) invalid(path + ".k", "must be at least 4");
    f.amp = number(j, "amp", path, f.amp);
    if (j.contains("terms")) {
        const json& t = j.at("terms");
        if (!t.is_array() || t.empty()) invalid(path + ".terms", "expected a non-empty list of [i, j, coefficient]");
        f.terms.clear();
        for (std::size_t n = 0; n < t.size(); ++n) {
            const json& e = t[n];
            const std::string p = path + ".terms[" + std::to_string(n) + "]";
            if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
                !e[2].is_number()) {
                invalid(p, "expected [i, j, coefficient] with integer exponents");
            }
            if (e[0].get<int>() < 0 || e[1].get<int>() < 0) invalid(p, "exponents must be non-negative");
            f.terms.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
        }
    }
    return f;
}

json field_json(const FieldConfig& f) {
    json t = json::array();
    for (const auto& e : f.terms) t.push_back(json::array({static_cast<int>(e[0]), static_cast<int>(e[1]), e[2]}));
    return {{"type", f.type}, {"center", to_json(f.center)}, {"radius", f.radius},
            {"k", f.k},       {"amp", f.amp},                {"terms", t}};
}

}  // namespace

FieldPtr FieldConfig::build() const {
    if (type == "zero") return make_zero_field();
    if (type == "manufactured") return build_pair().w;
    return make_bump_poly(center, radius, amp * Poly2::from_terms(terms));
}

ManufacturedPair FieldConfig::build_pair() const {
    if (type != "manufactured") throw ConfigInvalid("study.field.type: a manufactured field is required here");
    return make_manufactured_pair(center, radius, k, amp, Poly2::from_terms(terms));
}

Config parse_config(const json& j) {
    only_keys(j, "config", {"material", "domain", "study", "output", "threads"});
    Config c;

    if (!j.contains("material")) invalid("material", "required section missing");
    const json& m = j.at("material");
    only_keys(m, "material", {"kZ", "kC", "tau0", "ktheta", "dtheta0"});
    c.material.kZ = number(m, "kZ", "material");
    c.material.kC = number(m, "kC", "material", 0.0);
    if (m.contains("tau0") && (m.contains("ktheta") || m.contains("dtheta0"))) {
        invalid("material.tau0", "give either tau0 or ktheta and dtheta0, not both");
    }
    if (m.contains("ktheta") || m.contains("dtheta0")) {
        c.material.tau0 = -number(m, "ktheta", "material") * number(m, "dtheta0", "material");
    } else {
        c.material.tau0 = number(m, "tau0", "material", 0.0);
    }
    try {
        c.material.validate();
    } catch (const InvalidMaterial& e) {
        invalid("material", e.what());
    }

    if (!j.contains("domain")) invalid("domain", "required section missing");
    const json& d = j.at("domain");
    only_keys(d, "domain", {"kind", "center", "radius", "size"});
    const std::string kind = text(d, "kind", "domain");
    const Vec2 center = vec2(d, "center", "domain", Vec2{0.0, 0.0});
    if (kind == "disc") {
        const double r = number(d, "radius", "domain");
        if (!(r > 0.0)) invalid("domain.radius", "must be positive");
        c.domain = Region::disc(center, r);
    } else if (kind == "rectangle") {
        const Vec2 size = vec2(d, "size", "domain");
        if (!(size.x > 0.0 && size.y > 0.0)) invalid("domain.size", "must be positive");
        c.domain = Region::rectangle(center, 0.5 * size);
    } else {
        invalid("domain.kind", "expected disc or rectangle");
    }

    if (!j.contains("study")) invalid("study", "required section missing");
    const json& s = j.at("study");
    only_keys(s, "study", {"name", "ell", "levels", "load", "field", "gamma", "grid_cells"});
    c.study.name = text(s, "name", "study");
    static const std::set<std::string> names{"recovery_local", "recovery_nonlocal", "minimizer", "gamma_effect",
                                             "selftest"};
    if (!names.count(c.study.name)) {
        invalid("study.name", "expected recovery_local, recovery_nonlocal, minimizer, gamma_effect or selftest");
    }
    if (s.contains("ell")) {
        const json& e = s.at("ell");
        if (!e.is_array() || e.empty()) invalid("study.ell", "expected a non-empty list of lattice sizes");
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!e[k].is_number() || !(e[k].get<double>() > 0.0)) {
                invalid("study.ell[" + std::to_string(k) + "]", "expected a positive number");
            }
            c.study.ells.push_back(e[k].get<double>());
            if (k > 0 && !(c.study.ells[k] < c.study.ells[k - 1])) {
                invalid("study.ell[" + std::to_string(k) + "]", "lattice sizes must strictly decrease");
            }
        }
    }
    c.study.levels = integer(s, "levels", "study", c.study.levels);
    if (c.study.levels < 1 || c.study.levels > 8) invalid("study.levels", "must be in [1, 8]");
    c.study.load = number(s, "load", "study", c.study.load);
    if (s.contains("field")) c.study.field = parse_field(s.at("field"), "study.field");
    c.study.gamma = text(s, "gamma", "study", c.study.gamma);
    if (c.study.gamma != "manufactured" && c.study.gamma != "grid" && c.study.gamma != "zero") {
        invalid("study.gamma", "expected manufactured, grid or zero");
    }
    if (s.contains("grid_cells")) {
        const json& g = s.at("grid_cells");
        if (!g.is_array() || g.empty()) invalid("study.grid_cells", "expected a non-empty list of integers");
        c.study.grid_cells.clear();
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!g[k].is_number_integer() || g[k].get<int>() < 2) {
                invalid("study.grid_cells[" + std::to_string(k) + "]", "expected an integer >= 2");
            }
            c.study.grid_cells.push_back(g[k].get<int>());
        }
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        only_keys(o, "output", {"dir", "cg_tol", "poisson_tol", "quad_tol"});
        c.output.dir = text(o, "dir", "output", c.output.dir);
        c.output.cg_tol = number(o, "cg_tol", "output", c.output.cg_tol);
        c.output.poisson_tol = number(o, "poisson_tol", "output", c.output.poisson_tol);
        c.output.quad_tol = number(o, "quad_tol", "output", c.output.quad_tol);
        for (const char* k : {"cg_tol", "poisson_tol", "quad_tol"}) {
            if (!(number(o, k, "output", 1.0) > 0.0)) invalid(std::string("output.") + k, "must be positive");
        }
    }

    c.threads = integer(j, "threads", "config", 1);
    if (c.threads < 1) invalid("threads", "must be at least 1");
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid(path + ": cannot open file");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigInvalid(path + ": " + e.what());
    }
    return parse_config(j);
}

json Config::effective() const {
    json dom;
    if (domain.kind == Region::Kind::Disc) {
        dom = {{"kind", "disc"}, {"center", to_json(domain.center)}, {"radius", domain.radius}};
    } else {
        dom = {{"kind", "rectangle"}, {"center", to_json(domain.center)}, {"size", to_json(2.0 * domain.half_extents)}};
    }
    json st = {{"name", study.name},   {"levels", study.levels},          {"load", study.load},
               {"gamma", study.gamma}, {"field", field_json(study.field)}, {"grid_cells", study.grid_cells}};
    st["ell"] = study_ells(*this);
    return {{"material", {{"kZ", material.kZ}, {"kC", material.kC}, {"tau0", material.tau0}}},
            {"domain", dom},
            {"study", st},
            {"output",
             {{"dir", output.dir},
              {"cg_tol", output.cg_tol},
              {"poisson_tol", output.poisson_tol},
              {"quad_tol", output.quad_tol}}},
            {"threads", threads}};
}

std::vector<double> study_ells(const Config& c) {
    if (!c.study.ells.empty()) return c.study.ells;
    std::vector<double> v;
    const double first = c.domain.diameter() / 40.0;
    for (int k = 0; k < c.study.levels; ++k) v.push_back(first / std::pow(2.0, k));
    return v;
}

}  // namespace hexbend
