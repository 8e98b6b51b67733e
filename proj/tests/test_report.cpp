#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opcalc/report.hpp"

#include <filesystem>
#include <fstream>

using namespace opcalc;
namespace fs = std::filesystem;

namespace {
ScanResult make_result(const std::string& name) {
    ScanResult r;
    r.scenario = name;
    r.values["alpha"] = 1.5;
    r.add_check("close", 1.02, 1.0, 0.05, "anchor-a");
    r.add_bound_check("under", 0.3, 0.5, "anchor-b");
    Series s;
    s.x = {1.0, 2.0, 4.0, 8.0};
    s.y = {1.0, 0.5, 0.25, 0.125};
    s.has_fit = true;
    s.fitted_slope = -1.0;
    s.predicted_slope = -1.0;
    r.series["decay"] = s;
    return r;
}
} // namespace

TEST_CASE("check margins and pass flags") {
    ScanResult r;
    Check& good = r.add_check("g", 1.02, 1.0, 0.05, "a");
    CHECK(good.pass);
    CHECK(good.margin == doctest::Approx(0.03));
    Check& bad = r.add_check("b", 1.10, 1.0, 0.05, "a");
    CHECK_FALSE(bad.pass);
    CHECK(bad.margin == doctest::Approx(-0.05));
    CHECK_FALSE(r.all_pass());
    ScanResult r2;
    Check& bound = r2.add_bound_check("bd", 0.7, 0.5, "a");
    CHECK_FALSE(bound.pass);
    CHECK(bound.margin == doctest::Approx(-0.2));
}

TEST_CASE("every check carries its anchor and tolerance in JSON") {
    ScanResult r = make_result("s1");
    auto j = to_json(r);
    CHECK(j["scenario"] == "s1");
    CHECK(j["pass"] == true);
    REQUIRE(j["checks"].size() == 2);
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("anchor"));
        CHECK_FALSE(c["anchor"].get<std::string>().empty());
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("margin"));
    }
    CHECK(j["series"]["decay"]["fitted_slope"] == -1.0);
}

TEST_CASE("to_json is deterministic (no timing fields)") {
    ScanResult a = make_result("s");
    ScanResult b = make_result("s");
    a.runtime_seconds = 1.0;
    b.runtime_seconds = 99.0;
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("emit_report writes index, json, csv and svg") {
    fs::path dir = fs::temp_directory_path() / "opcalc_report_test";
    fs::remove_all(dir);
    std::vector<ScanResult> results = {make_result("alpha_scan"), make_result("beta_scan")};
    emit_report(results, dir);
    CHECK(fs::exists(dir / "index.json"));
    CHECK(fs::exists(dir / "alpha_scan" / "result.json"));
    CHECK(fs::exists(dir / "alpha_scan" / "result.csv"));
    CHECK(fs::exists(dir / "beta_scan" / "result.csv"));
    // series with fits get an SVG
    bool svg = false;
    for (const auto& e : fs::directory_iterator(dir / "alpha_scan"))
        if (e.path().extension() == ".svg") svg = true;
    CHECK(svg);
    // index maps scenario to pass/margin
    std::ifstream in(dir / "index.json");
    nlohmann::json idx;
    in >> idx;
    CHECK(idx.contains("alpha_scan"));
    CHECK(idx["alpha_scan"]["pass"] == true);
    fs::remove_all(dir);
}

TEST_CASE("emit_report rejects an empty result list") {
    CHECK_THROWS_AS(emit_report({}, fs::temp_directory_path() / "opcalc_empty"),
                    std::invalid_argument);
}

TEST_CASE("csv carries all rows with full precision") {
    fs::path dir = fs::temp_directory_path() / "opcalc_csv_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    ScanResult r = make_result("s");
    r.values["pi_ish"] = 3.14159265358979312;
    write_scenario_csv(r, dir / "out.csv");
    std::ifstream in(dir / "out.csv");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.find("check,close") != std::string::npos);
    CHECK(text.find("value,pi_ish,3.1415926535897931") != std::string::npos);
    CHECK(text.find("series:decay") != std::string::npos);
    fs::remove_all(dir);
}
