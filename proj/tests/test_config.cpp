#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexbend/config.hpp"
#include "hexbend/errors.hpp"
#include "hexbend/runner.hpp"

using namespace hexbend;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
    return json::parse(R"({
        "material": {"kZ": 1.0},
        "domain": {"kind": "disc", "radius": 1.0},
        "study": {"name": "minimizer"}
    })");
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigInvalid& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("missing kZ names the field") {
    json j = minimal();
    j["material"].erase("kZ");
    CHECK(error_of(j).find("material.kZ") != std::string::npos);
}

TEST_CASE("schema violations carry their path") {
    json j = minimal();
    j["study"]["bogus"] = 1;
    CHECK(error_of(j).find("study.bogus") != std::string::npos);
    j = minimal();
    j["study"]["ell"] = {0.1, 0.2};
    CHECK(error_of(j).find("study.ell[1]") != std::string::npos);
    j = minimal();
    j["material"]["tau0"] = 0.5;
    CHECK(error_of(j).find("material") != std::string::npos);
    j = minimal();
    j["domain"]["kind"] = "hexagon";
    CHECK(error_of(j).find("domain.kind") != std::string::npos);
    j = minimal();
    j["study"]["name"] = "nope";
    CHECK(error_of(j).find("study.name") != std::string::npos);
}

TEST_CASE("wedge parameters give the self-stress") {
    json j = minimal();
    j["material"]["ktheta"] = 2.0;
    j["material"]["dtheta0"] = 0.1;
    CHECK(parse_config(j).material.tau0 == doctest::Approx(-0.2));
    j["material"]["tau0"] = -0.2;
    CHECK_THROWS_AS(parse_config(j), ConfigInvalid);
}

TEST_CASE("defaults and round trip of the effective config") {
    const Config c = parse_config(minimal());
    CHECK(c.threads == 1);
    CHECK(c.output.cg_tol == 1e-7);
    const auto ells = study_ells(c);
    REQUIRE(ells.size() == 4);
    CHECK(ells[0] == doctest::Approx(2.0 / 40.0));
    CHECK(ells[3] == doctest::Approx(2.0 / 320.0));
    const json e = c.effective();
    CHECK(parse_config(e).effective() == e);
}

TEST_CASE("config files may carry comments") {
    const fs::path p = fs::temp_directory_path() / "hexbend_cfg_comments.json";
    std::ofstream(p) << "{\n  // comment\n  \"material\": {\"kZ\": 2},\n  \"domain\": {\"kind\": \"rectangle\", \"size\": [1, 2]},\n"
                        "  \"study\": {\"name\": \"selftest\"}\n}\n";
    const Config c = load_config(p.string());
    CHECK(c.material.kZ == 2.0);
    CHECK(c.domain.half_extents.y == 1.0);
    fs::remove(p);
    CHECK_THROWS_AS(load_config("/nonexistent/hexbend.json"), ConfigInvalid);
}

TEST_CASE("a run writes the effective config, the CSV and the summary, identically on rerun") {
    json j = minimal();
    j["study"]["ell"] = {0.2, 0.1, 0.05};
    const fs::path dir = fs::temp_directory_path() / "hexbend_run_test";
    fs::remove_all(dir);
    j["output"] = {{"dir", dir.string()}, {"cg_tol", 1e-9}};
    const Config c = parse_config(j);
    std::ostringstream log;
    const RunOutcome o = run_study(c, log);
    CHECK(o.study == "minimizer");
    const std::string csv = slurp(dir / "minimizer.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "ell,l2_error,center_deflection,ref_deflection");
    const json summary = json::parse(slurp(dir / "summary.json"));
    for (const char* k : {"study", "params", "extrapolated_value", "reference_value", "relative_error"}) {
        CHECK(summary.contains(k));
    }
    CHECK(json::parse(slurp(dir / "config.effective.json")) == c.effective());
    run_study(c, log);
    CHECK(slurp(dir / "minimizer.csv") == csv);
    fs::remove_all(dir);
}

}
