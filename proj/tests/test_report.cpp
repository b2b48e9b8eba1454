#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tailasym/report.hpp"

using namespace tailasym;

namespace {

ExperimentConfig tiny_sum_config() {
    auto cfg = preset_table2();
    cfg.mc.n_samples = 4096;
    cfg.mc.n_reps = 2;
    cfg.mc.chunk_size = 1u << 10;
    cfg.sum_grid = {5.0, 10.0};
    cfg.include_indicator_estimators = false;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("six-significant-digit decimal formatting") {
    CHECK(format_six_signif(3.888e-2) == "0.0388800");
    CHECK(format_six_signif(7.34e-6) == "0.00000734000");
    CHECK(format_six_signif(0.0) == "0.00000");
    CHECK(format_six_signif(123.4564) == "123.456");
    CHECK(format_six_signif(1.0) == "1.00000");
    CHECK(format_six_signif(-3.888e-2) == "-0.0388800");
}

TEST_CASE("preset configs round-trip through serialization") {
    for (const auto& cfg : {preset_table1(), preset_table2()}) {
        const std::string first = serialize_config(cfg);
        const std::string second = serialize_config(parse_config(first));
        CHECK(first == second);
    }
}

TEST_CASE("validation reports field-level problems") {
    auto expect_error = [](const std::string& json, const std::string& needle) {
        try {
            parse_config(json);
            FAIL_CHECK("expected validation error for ", needle);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    const std::string base = serialize_config(preset_table2());
    // empty grid
    std::string broken = base;
    broken.replace(broken.find("\"grid\": ["), 9, "\"grid_\": [");
    expect_error(broken, "grid");
    expect_error("{\"mode\": \"nope\"}", "mode");
    expect_error("not json at all", "JSON");

    auto cfg = preset_table2();
    cfg.r = 1.5;
    expect_error(serialize_config(cfg), "model.r");
    cfg = preset_table2();
    cfg.weights.a1 = -1.0;
    expect_error(serialize_config(cfg), "weights.a1");
    cfg = preset_table2();
    cfg.margin_x.family = "cauchy";
    expect_error(serialize_config(cfg), "margin_x");
    cfg = preset_table2();
    cfg.mode = Mode::RiskSum;  // keeps iid weights -> invalid
    expect_error(serialize_config(cfg), "risk modes require discount_product");
    cfg = preset_table2();
    cfg.sum_grid = {-3.0};
    expect_error(serialize_config(cfg), "positive");
}

TEST_CASE("rows carry consistent ratio columns") {
    const auto rows = run_experiment(tiny_sum_config());
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.sim_stderr >= 0.0);
        CHECK(std::fabs(row.ratio1 - row.asy1 / row.sim) < 1e-12);
        CHECK(std::fabs(row.ratio2 - row.asy2 / row.sim) < 1e-12);
    }
}

TEST_CASE("csv emission and parse-back") {
    const auto rows = run_experiment(tiny_sum_config());
    const std::string path = "test_rows.csv";
    emit(rows, OutputFormat::Csv, path, false);
    const std::string text = slurp(path);
    CHECK(text.rfind("threshold,sim,sim_stderr,asy1,asy2,ratio1,ratio2\n", 0) ==
          0);
    CHECK(text.back() == '\n');
    CHECK(text.find('\r') == std::string::npos);

    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::size_t n_rows = 0;
    while (std::getline(in, line)) {
        double t, sim, se, a1, a2, r1, r2;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &t,
                            &sim, &se, &a1, &a2, &r1, &r2) == 7);
        CHECK(t == rows[n_rows].threshold[0]);
        CHECK(sim == doctest::Approx(rows[n_rows].sim).epsilon(1e-5));
        ++n_rows;
    }
    CHECK(n_rows == rows.size());
    std::remove(path.c_str());

    CHECK_THROWS(emit({}, OutputFormat::Csv, "x.csv", false));
}

TEST_CASE("markdown layout") {
    auto cfg = tiny_sum_config();
    const auto rows = run_experiment(cfg);
    const std::string md = render(rows, OutputFormat::Markdown, false);
    std::istringstream in(md);
    std::string line;
    std::size_t n_lines = 0;
    while (std::getline(in, line)) {
        // 6 data columns => 7 pipe separators
        CHECK(std::count(line.begin(), line.end(), '|') == 7);
        ++n_lines;
    }
    CHECK(n_lines == rows.size() + 2);

    // joint tables put the pair in the first column
    auto jcfg = preset_table1();
    jcfg.mc.n_samples = 4096;
    jcfg.mc.n_reps = 2;
    jcfg.mc.chunk_size = 1u << 10;
    jcfg.joint_grid = {{5.0, 6.0}};
    jcfg.include_indicator_estimators = false;
    const auto jrows = run_experiment(jcfg);
    const std::string jmd = render(jrows, OutputFormat::Markdown, true);
    CHECK(jmd.find("| (5,6) |") != std::string::npos);
}

TEST_CASE("full-run determinism across scheduling") {
    auto cfg = tiny_sum_config();
    const auto rows_a = run_experiment(cfg, {.parallel = false});
    const auto rows_b = run_experiment(cfg, {.parallel = true});
    const std::string a = render(rows_a, OutputFormat::Csv, false);
    const std::string b = render(rows_b, OutputFormat::Csv, false);
    CHECK(a == b);
}

TEST_CASE("risk modes run end to end") {
    ExperimentConfig cfg;
    cfg.mode = Mode::RiskSum;
    cfg.r = 0.6;
    cfg.margin_x = {"pareto", 2.01, 1.0, 0, 0, 0};
    cfg.margin_y = {"pareto", 2.01, 1.0, 0, 0, 0};
    cfg.weights.variant = "discount_product";
    cfg.weights.a = 1.0;
    cfg.weights.b = 2.0;
    cfg.weights.n = 2;
    cfg.weights.m = 2;
    cfg.sum_grid = {30.0};
    cfg.mc = {10'000, 2, 9, 1u << 10};

    const std::string text = serialize_config(cfg);
    const auto parsed = parse_config(text);
    const auto rows = run_experiment(parsed);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].asy1 > 0.0);
    CHECK(rows[0].asy2 > rows[0].asy1);

    // pair grids collapse to z = x + y for sum modes
    auto cfg2 = cfg;
    cfg2.sum_grid.clear();
    const auto parsed2 = parse_config([&] {
        std::string t = serialize_config(cfg2);
        const auto pos = t.find("\"grid\": []");
        REQUIRE(pos != std::string::npos);
        t.replace(pos, 10, "\"grid\": [[10, 20]]");
        return t;
    }());
    REQUIRE(parsed2.sum_grid.size() == 1);
    CHECK(parsed2.sum_grid[0] == 30.0);

    auto joint_cfg = cfg;
    joint_cfg.mode = Mode::RiskJoint;
    joint_cfg.sum_grid.clear();
    joint_cfg.joint_grid = {{12.0, 15.0}};
    const auto jrows = run_experiment(joint_cfg);
    REQUIRE(jrows.size() == 1);
    CHECK(jrows[0].asy2 >= jrows[0].asy1);
}

TEST_CASE("diagnostics report contains every section") {
    auto cfg = tiny_sum_config();
    cfg.mode = Mode::Diag;
    cfg.mc.n_samples = 65'536;
    const std::string report = run_diagnostics(cfg);
    CHECK(report.find("Local-mass ratio") != std::string::npos);
    CHECK(report.find("sum-tail expansion") != std::string::npos);
    CHECK(report.find("Copula sampler checks") != std::string::npos);
    CHECK(report.find("FAIL") == std::string::npos);
}

}  // TEST_SUITE
