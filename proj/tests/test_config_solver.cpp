#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "slugflow/config.hpp"
#include "slugflow/solver.hpp"

using namespace slugflow;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("config parsing: defaults, validation, unknown keys") {
    SolveConfig cfg = parse_config("{}");
    CHECK(cfg.M0 == 1.0);
    CHECK(cfg.t_inj == 1.0);
    CHECK_FALSE(cfg.fv.has_value());

    cfg = parse_config(R"({"Gamma": 5.0, "beta": 4.0, "nx": 32})");
    CHECK(cfg.Gamma == 5.0);
    CHECK(cfg.nx == 32);

    CHECK_THROWS_WITH_AS(parse_config(R"({"t_inj": -1.0})"),
                         doctest::Contains("t_inj"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"banana": 1.0})"),
                         doctest::Contains("banana"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"fv": {"weird": 1}})"),
                         doctest::Contains("weird"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"root_tol": 0.0})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);

    // serialization round trip preserves every field
    cfg = parse_config(R"({"M0":2.5,"m":0.7,"nx":48,"fv":{"eps":[1e-3],"t_final":0.9}})");
    SolveConfig back = parse_config(cfg.to_json());
    CHECK(back.M0 == cfg.M0);
    CHECK(back.m == cfg.m);
    CHECK(back.nx == cfg.nx);
    REQUIRE(back.fv.has_value());
    CHECK(back.fv->eps == cfg.fv->eps);
    CHECK(back.fv->t_final == cfg.fv->t_final);
}

TEST_CASE("grid CSV reader inverts the writer") {
    GridField gf;
    gf.x = {0.25, 0.75};
    gf.t = {1.0, 2.0, 3.0};
    gf.s = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    gf.c = {1, 0.9, 0.8, 0.7, 0.6, 0.5};
    std::ostringstream os;
    gf.write_csv(os);
    std::istringstream is(os.str());
    GridField back = read_grid_csv(is);
    REQUIRE(back.nx() == 2);
    REQUIRE(back.nt() == 3);
    CHECK(back.s == gf.s);
    CHECK(back.c == gf.c);
    CHECK(back.x == gf.x);
    CHECK(back.t == gf.t);

    std::istringstream bad("wrong,header\n1,2,3,4\n");
    CHECK_THROWS_AS(read_grid_csv(bad), std::invalid_argument);
}

TEST_CASE("run_solve: bundle written, checks pass, byte-identical reruns") {
    SolveConfig cfg = parse_config(R"({"nx": 24, "nt": 16, "n_ta": 64, "n_jouguet": 64})");
    fs::path base = fs::temp_directory_path() / "slugflow_solver_test";
    fs::remove_all(base);
    cfg.output_dir = (base / "run1").string();
    SolveSummary s1 = run_solve(cfg);
    INFO(s1.first_failure);
    CHECK(s1.all_pass());
    for (const char* f : {"zeta_front.csv", "characteristics.csv", "field_lagrange.csv",
                          "field_physical.csv", "report.txt"})
        CHECK(fs::exists(base / "run1" / f));

    // the report echoes the effective configuration verbatim
    std::string report = slurp(base / "run1" / "report.txt");
    CHECK(report.find(s1.effective.to_json()) != std::string::npos);

    cfg.output_dir = (base / "run2").string();
    run_solve(cfg);
    for (const char* f : {"zeta_front.csv", "characteristics.csv", "field_lagrange.csv",
                          "field_physical.csv"})
        CHECK(slurp(base / "run1" / f) == slurp(base / "run2" / f));
    fs::remove_all(base);
}
