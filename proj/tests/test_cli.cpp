#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "meanfield/config.hpp"
#include "meanfield/io.hpp"
#include "meanfield/rng.hpp"
#include "meanfield/runner.hpp"

namespace fs = std::filesystem;
using namespace meanfield;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() /
                 ("meanfield-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string thrown_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config text round trip") {
    RunConfig cfg;
    cfg.mode = RunMode::Scan;
    cfg.epsilon = 0.3141592653589793;
    cfg.epsilon_grid = {0.1, 1.0 / 3.0, 0.45};
    cfg.sites = 3;
    cfg.grid_size = 4096;
    cfg.steps = 12345;
    cfg.burn_in = 77;
    cfg.seed = 987654321;
    cfg.init = "uniform-random";
    cfg.observables = {"label", "min_gap"};
    cfg.out_dir = "out/scan-a";
    CHECK(parse_config_text(emit_config_text(cfg)) == cfg);

    RunConfig plain;
    CHECK(parse_config_text(emit_config_text(plain)) == plain);
}

TEST_CASE("config rejects unknown keys and bad values by name") {
    CHECK(thrown_message([] { parse_config_text("granularity=9\n"); })
              .find("granularity") != std::string::npos);
    CHECK(thrown_message([] { parse_config_text("epsilon=fast\n"); }).find("epsilon") !=
          std::string::npos);
    CHECK(thrown_message([] { parse_config_text("steps=12x\n"); }).find("steps") !=
          std::string::npos);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), std::invalid_argument);

    RunConfig cfg;
    cfg.epsilon = 1.2;
    CHECK(thrown_message([&] { validate_config(cfg); }).find("epsilon") !=
          std::string::npos);
    cfg.epsilon = 0.3;
    cfg.sites = 1;
    CHECK(thrown_message([&] { validate_config(cfg); }).find("sites") !=
          std::string::npos);
    cfg.sites = 2;
    cfg.mode = RunMode::Scan;
    CHECK(thrown_message([&] { validate_config(cfg); }).find("epsilon_grid") !=
          std::string::npos);
}

TEST_CASE("initial state forms") {
    InitSpec u = parse_init("uniform-random");
    CHECK(u.kind == InitSpec::Kind::UniformRandom);

    InitSpec e = parse_init("0.1, 0.25,0.7");
    CHECK(e.kind == InitSpec::Kind::Explicit);
    CHECK(e.positions == std::vector<double>{0.1, 0.25, 0.7});

    InitSpec b = parse_init("bump(0.5,0.4)");
    CHECK(b.kind == InitSpec::Kind::Bump);
    CHECK(b.a == 0.5);
    CHECK(b.b == 0.4);

    InitSpec s = parse_init("sine(0.025)");
    CHECK(s.kind == InitSpec::Kind::Sine);
    CHECK(s.a == 0.025);

    CHECK_THROWS_AS(parse_init("blob(1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_init("bump(0.5)"), std::invalid_argument);

    RunConfig cfg;
    cfg.mode = RunMode::Finite;
    cfg.sites = 2;
    cfg.init = "bump(0.5,0.4)";
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.init = "0.1,0.2,0.3";
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.mode = RunMode::Density;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("digests, atomic writes, and number formatting") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    fs::path dir = fresh_dir("atomic");
    fs::path file = dir / "data.csv";
    atomic_write_file(file.string(), "hello\n");
    CHECK(read_file(file.string()) == "hello\n");
    CHECK_FALSE(fs::exists(file.string() + ".tmp"));
    atomic_write_file(file.string(), "replaced\n");
    CHECK(read_file(file.string()) == "replaced\n");
    fs::remove_all(dir);

    StreamRng rng(3, "format-roundtrip", 0);
    for (int i = 0; i < 200; ++i) {
        double x = (rng.next_unit() - 0.5) * 1e3;
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_csv_row({0.5, 0.25}) == "0.5,0.25");
}

TEST_CASE("orbit and density runs write the expected files") {
    fs::path dir = fresh_dir("finite");
    RunConfig cfg;
    cfg.mode = RunMode::Finite;
    cfg.epsilon = 0.3;
    cfg.sites = 3;
    cfg.steps = 100;
    cfg.init = "0.1,0.2,0.7";
    cfg.observables = {"sum", "min_gap"};
    cfg.out_dir = dir.string();
    std::ostringstream log;
    RunArtifacts art = execute_run(cfg, log);
    REQUIRE(art.files.size() == 1);
    std::string orbit = read_file(art.files[0]);
    CHECK(orbit.rfind("step,x0,x1,x2,sum,min_gap\n", 0) == 0);
    CHECK(std::count(orbit.begin(), orbit.end(), '\n') == 101);
    CHECK(fs::exists(art.manifest_path));
    fs::remove_all(dir);

    fs::path ddir = fresh_dir("density");
    RunConfig dcfg;
    dcfg.mode = RunMode::Density;
    dcfg.epsilon = 0.75;
    dcfg.grid_size = 256;
    dcfg.steps = 3;
    dcfg.init = "bump(0.5,0.4)";
    dcfg.out_dir = ddir.string();
    std::ostringstream dlog;
    RunArtifacts dart = execute_run(dcfg, dlog);
    REQUIRE(dart.files.size() == 2);
    std::string series = read_file(dart.files[1]);
    CHECK(std::count(series.begin(), series.end(), '\n') == 5);  // header + steps 0..3
    fs::remove_all(ddir);
}

TEST_CASE("identical runs replay to identical artifacts") {
    RunConfig cfg;
    cfg.mode = RunMode::Scan;
    cfg.epsilon_grid = {0.2, 0.45};
    cfg.sites = 2;
    cfg.steps = 3000;
    cfg.burn_in = 500;
    cfg.seed = 11;

    fs::path a = fresh_dir("replay-a");
    fs::path b = fresh_dir("replay-b");
    std::ostringstream log;
    cfg.out_dir = a.string();
    RunArtifacts ra = execute_run(cfg, log);
    cfg.out_dir = b.string();
    RunArtifacts rb = execute_run(cfg, log);

    std::string csv_a = read_file(ra.files[0]);
    std::string csv_b = read_file(rb.files[0]);
    CHECK(csv_a == csv_b);

    auto ma = nlohmann::json::parse(read_file(ra.manifest_path));
    auto mb = nlohmann::json::parse(read_file(rb.manifest_path));
    CHECK(ma["tool_version"] == kToolVersion);
    CHECK(ma["outputs"] == mb["outputs"]);
    CHECK(ma["outputs"][0]["sha256"] == sha256_hex(csv_a));
    CHECK(ma["master_seed"] == 11);
    CHECK(ma["config"]["epsilon_grid"][1] == 0.45);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("partition depth run reports on the log stream") {
    fs::path dir = fresh_dir("renorm");
    RunConfig cfg;
    cfg.mode = RunMode::Renorm;
    cfg.epsilon = 0.25;
    cfg.out_dir = dir.string();
    std::ostringstream log;
    execute_run(cfg, log);
    CHECK(log.str().find("n=0 K=1") != std::string::npos);

    cfg.epsilon_grid = {1.0 / 3.0, 0.45};
    std::ostringstream log2;
    execute_run(cfg, log2);
    CHECK(log2.str().find("n=1 K=2") != std::string::npos);
    CHECK(log2.str().find("n=2 K=4") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("worker count comes from the environment alone") {
    ::unsetenv("MEANFIELD_WORKERS");
    CHECK(worker_count() == 1);
    ::setenv("MEANFIELD_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("MEANFIELD_WORKERS", "lots", 1);
    CHECK_THROWS_AS(worker_count(), std::invalid_argument);

    // the worker count never changes the data written
    RunConfig cfg;
    cfg.mode = RunMode::Scan;
    cfg.epsilon_grid = {0.2, 0.3, 0.42};
    cfg.sites = 3;
    cfg.steps = 2000;
    cfg.burn_in = 200;
    cfg.seed = 5;
    std::ostringstream log;

    ::unsetenv("MEANFIELD_WORKERS");
    fs::path a = fresh_dir("workers-a");
    cfg.out_dir = a.string();
    RunArtifacts ra = execute_run(cfg, log);
    std::string serial = read_file(ra.files[0]);

    ::setenv("MEANFIELD_WORKERS", "2", 1);
    fs::path b = fresh_dir("workers-b");
    cfg.out_dir = b.string();
    RunArtifacts rb = execute_run(cfg, log);
    std::string parallel = read_file(rb.files[0]);
    ::unsetenv("MEANFIELD_WORKERS");

    CHECK(serial == parallel);
    fs::remove_all(a);
    fs::remove_all(b);
}
