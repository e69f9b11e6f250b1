#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "gapfield/config.hpp"
#include "gapfield/store.hpp"

using namespace gapfield;

namespace {

const char* kMinimalConfig = R"(
geometry {
  kind = disks
  r = 0.5
  R = 1.0
  eps = 1e-3
}
)";

const char* kFullConfig = R"(
# full run configuration
geometry {
  kind = mprofile
  m = 3
  lambda = 1.0
  eps = 1e-3
  mode = planar
}
mesh {
  h_target = 0.05
  gap_layers = 10
  band_factor = 0.25
}
boundary {
  phi = poly: 2*xn^2 + -0.5*x1*xn
}
coefficients {
  preset = constant-offdiag
  a_off = 0.3
}
sweep {
  eps = 1e-2, 3e-3, 1e-3
}
oracle {
  n = 3
  m = 2
}
output {
  dir = results
}
seed = 99
workers = 2
tol = 1e-11
)";

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
    const ParseResult res = parse_config_text(kMinimalConfig);
    REQUIRE(res.ok());
    CHECK(res.config.mesh.gap_layers == 8);
    CHECK(res.config.tol == 1e-10);
    CHECK(res.config.mesh.h_target == 0.04);
    CHECK(res.config.workers == 1);
    CHECK(res.config.boundary.phi == "linear-xn");
    CHECK(res.config.sweep.eps.size() == 5);
    const GapDomain dom = build_domain(res.config.geometry);
    CHECK(dom.eps == 1e-3);
}

TEST_CASE("full config parses and builds") {
    const ParseResult res = parse_config_text(kFullConfig);
    REQUIRE(res.ok());
    const RunConfig& cfg = res.config;
    CHECK(cfg.mesh.gap_layers == 10);
    CHECK(cfg.seed == 99);
    CHECK(cfg.workers == 2);
    CHECK(cfg.tol == 1e-11);
    CHECK(cfg.output_dir == "results");

    const PhiSpec phi = build_phi(cfg.boundary);
    // 2 xn^2 - 0.5 x1 xn at (2, 3): 18 - 3 = 15
    CHECK(phi.value({2.0, 3.0}) == doctest::Approx(15.0).epsilon(1e-14));
    const CoefficientField A = build_coefficients(cfg.coefficients);
    CHECK(A.lambda == doctest::Approx(0.7));
    const SweepSpec spec = build_sweep_spec(cfg);
    CHECK(spec.eps_list.size() == 3);
    const GapDomain dom = spec.domain_family(1e-4);
    CHECK(dom.m == 3);
    CHECK(dom.eps == 1e-4);
}

TEST_CASE("out-of-range sweep eps is rejected with a clear message") {
    const std::string text = std::string(kMinimalConfig) + "\nsweep {\n  eps = 0.6\n}\n";
    const ParseResult res = parse_config_text(text);
    REQUIRE_FALSE(res.ok());
    bool found = false;
    for (const auto& e : res.errors) found = found || e.find("sweep.eps") != std::string::npos;
    CHECK(found);
}

TEST_CASE("unknown keys are reported by name, and all errors are collected") {
    const std::string text = R"(
geometry {
  kind = disks
  epsilonn = 0.1
}
mesh {
  h_target = -1
}
)";
    const ParseResult res = parse_config_text(text);
    REQUIRE_FALSE(res.ok());
    CHECK(res.errors.size() >= 2);
    bool unknown = false, range = false;
    for (const auto& e : res.errors) {
        if (e.find("epsilonn") != std::string::npos) unknown = true;
        if (e.find("h_target") != std::string::npos) range = true;
    }
    CHECK(unknown);
    CHECK(range);
}

TEST_CASE("type mismatches are reported") {
    const std::string text = "geometry {\n  kind = disks\n  r = fast\n}\n";
    const ParseResult res = parse_config_text(text);
    REQUIRE_FALSE(res.ok());
    CHECK(res.errors.front().find("geometry.r") != std::string::npos);
}

TEST_CASE("non-decreasing sweep list is rejected") {
    const std::string text = std::string(kMinimalConfig) + "\nsweep {\n  eps = 1e-3, 1e-2\n}\n";
    CHECK_FALSE(parse_config_text(text).ok());
}

TEST_CASE("records CSV round-trips bit-exactly") {
    std::vector<SweepRecord> recs;
    SweepRecord r;
    r.eps = 1e-3;
    r.n = 2;
    r.m = 2;
    r.a11 = 140.57829601152838;
    r.Q = -0.123456789012345678;
    r.C1 = 0.3 + 1e-17;
    r.grad_mid = 987.654321;
    r.sup_diff_v1 = 3.3333333333333335;
    r.sup_diff_v0 = 1.0 / 3.0;
    r.flux_residual = -4.44e-17;
    r.mesh_vertices = 2345;
    r.cg_iters_v1 = 321;
    r.cg_iters_v0 = 123;
    r.wall_ms = 17.25;
    r.ok = true;
    recs.push_back(r);

    const std::string path = "records_roundtrip_test.csv";
    std::remove(path.c_str());
    append_records_csv(path, recs);
    const auto back = read_records_csv(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].eps == r.eps);
    CHECK(back[0].a11 == r.a11);
    CHECK(back[0].Q == r.Q);
    CHECK(back[0].C1 == r.C1);
    CHECK(back[0].grad_mid == r.grad_mid);
    CHECK(back[0].sup_diff_v1 == r.sup_diff_v1);
    CHECK(back[0].sup_diff_v0 == r.sup_diff_v0);
    CHECK(back[0].flux_residual == r.flux_residual);
    CHECK(back[0].mesh_vertices == r.mesh_vertices);

    // identical rows serialize to identical bytes
    CHECK(record_csv_line(r) == record_csv_line(back[0]));

    // appending keeps exactly one header
    append_records_csv(path, recs);
    std::ifstream in(path);
    std::string line;
    int headers = 0, rows = 0;
    while (std::getline(in, line)) {
        if (line == kRecordsCsvHeader) ++headers;
        else if (!line.empty()) ++rows;
    }
    CHECK(headers == 1);
    CHECK(rows == 2);
    std::remove(path.c_str());
}

TEST_CASE("store verdicts catch a tampered record") {
    SweepRecord good;
    good.eps = 1e-3;
    good.a11 = 10.0;
    good.Q = 0.5;
    good.ok = true;
    std::vector<SweepRecord> recs = {good};
    for (const auto& v : store_verdicts(recs)) CHECK(v.pass);

    SweepRecord bad = good;
    bad.a11 = -10.0;  // injected fault
    recs.push_back(bad);
    bool failed = false;
    for (const auto& v : store_verdicts(recs))
        if (!v.pass) failed = true;
    CHECK(failed);
}

TEST_CASE("rate fit line is a single structured record") {
    RateFit fit;
    fit.slope = -0.5;
    fit.residual_rms = 1e-3;
    fit.n_points = 5;
    const std::string line = format_rate_fit_line("a11", fit, -0.5, true);
    CHECK(line.find("\"quantity\": \"a11\"") != std::string::npos);
    CHECK(line.find("\"pass\": true") != std::string::npos);
    CHECK(line.find("\"slope\": -0.5") != std::string::npos);
}

TEST_CASE("missing config file reports an error") {
    const ParseResult res = parse_config("no_such_file_anywhere.cfg");
    CHECK_FALSE(res.ok());
}
