#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "trapnoise/cli.hpp"
#include "trapnoise/io.hpp"
#include "trapnoise/lineshape.hpp"

using namespace trapnoise;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "trapnoise");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string write_config(const fs::path& dir, const std::string& name, const std::string& body) {
    const auto path = (dir / name).string();
    write_text_file(path, body);
    return path;
}

const char* power_sweep_config = R"({
  "version": 1,
  "name": "pw",
  "geometry": {"n_traps": 50, "r_min_nm": 3, "r_max_nm": 8, "epsilon_r": 8.8},
  "suppression": {"kind": "power", "values": [0, 0.1, 0.5, 1, 2, 5, 10, 20],
                  "optical": {"p0": 0.4, "p_inf": 1, "p_sat_nw": 1.5}},
  "stark": {"beta": 1.44e-6},
  "mc": {"n_geometries": 20, "n_snapshots": 200}
})";

}  // namespace

TEST_CASE("sweep writes tables and is reproducible") {
    const auto dir = testsupport::scratch_dir("cli_sweep");
    const auto cfg = write_config(dir, "pw.json", power_sweep_config);
    const auto a = cli({"sweep", "-c", cfg, "-o", (dir / "a").string()});
    CHECK(a.code == exit_ok);
    CHECK(a.out.find("narrowest line") != std::string::npos);
    const auto b = cli({"sweep", "-c", cfg, "-o", (dir / "b").string()});
    CHECK(b.code == exit_ok);
    for (const char* f : {"pw_sweep.csv", "pw_sweep.json"}) {
        REQUIRE(fs::exists(dir / "a" / f));
        CHECK(read_text_file((dir / "a" / f).string()) == read_text_file((dir / "b" / f).string()));
    }
}

TEST_CASE("mc output is identical across runs and thread counts") {
    const auto dir = testsupport::scratch_dir("cli_mc");
    const auto cfg = write_config(dir, "pw.json", power_sweep_config);
    const auto one = cli({"mc", "-c", cfg, "-o", (dir / "t1").string(), "--threads", "1"});
    const auto three = cli({"mc", "-c", cfg, "-o", (dir / "t3").string(), "--threads", "3"});
    const auto again = cli({"mc", "-c", cfg, "-o", (dir / "t1b").string(), "--threads", "1"});
    REQUIRE(one.code == exit_ok);
    REQUIRE(three.code == exit_ok);
    REQUIRE(again.code == exit_ok);
    CHECK(one.out == three.out);
    for (const char* f : {"pw_mc.csv", "pw_mc.json", "pw_analytic.csv", "pw_agreement.csv"}) {
        const auto ref = read_text_file((dir / "t1" / f).string());
        CHECK(ref == read_text_file((dir / "t3" / f).string()));
        CHECK(ref == read_text_file((dir / "t1b" / f).string()));
    }
    const auto other = cli({"mc", "-c", cfg, "-o", (dir / "s").string(), "--seed", "99"});
    REQUIRE(other.code == exit_ok);
    CHECK(read_text_file((dir / "s" / "pw_mc.csv").string()) !=
          read_text_file((dir / "t1" / "pw_mc.csv").string()));
}

TEST_CASE("configuration errors exit with code 2 and name the field") {
    const auto dir = testsupport::scratch_dir("cli_config");
    const auto empty = write_config(dir, "empty.json",
                                    R"({"version": 1, "suppression": {"kind": "power", "values": []}})");
    const auto r1 = cli({"sweep", "-c", empty});
    CHECK(r1.code == exit_config);
    CHECK(r1.err.find("$.suppression.values") != std::string::npos);

    const auto missing = write_config(dir, "nogrid.json", R"({"version": 1})");
    CHECK(cli({"sweep", "-c", missing}).code == exit_config);

    const auto unknown = write_config(
        dir, "unknown.json",
        R"({"version": 1, "suppression": {"kind": "power", "values": [1], "optical": {"p0": 0.4, "psat": 2}}})");
    const auto r2 = cli({"sweep", "-c", unknown});
    CHECK(r2.code == exit_config);
    CHECK(r2.err.find("$.suppression.optical.psat") != std::string::npos);

    const auto range = write_config(
        dir, "range.json", R"({"version": 1, "suppression": {"kind": "power", "values": [1], "optical": {"p0": 1.4}}})");
    const auto r3 = cli({"sweep", "-c", range});
    CHECK(r3.code == exit_config);
    CHECK(r3.err.find("$.suppression.optical.p0") != std::string::npos);

    const auto version = write_config(dir, "v.json", R"({"version": 7})");
    CHECK(cli({"sweep", "-c", version}).code == exit_config);
    const auto broken = write_config(dir, "broken.json", "{\"version\": 1,");
    CHECK(cli({"sweep", "-c", broken}).code == exit_config);

    CHECK(cli({"frobnicate"}).code == exit_config);
    CHECK(cli({"sweep"}).code == exit_config);
    CHECK(cli({"--help"}).code == exit_ok);
    CHECK(cli({"sweep", "-c", (dir / "absent.json").string()}).code == exit_io);
}

TEST_CASE("fit reads data files and reports results") {
    const auto dir = testsupport::scratch_dir("cli_fit");
    write_text_file((dir / "sat.csv").string(),
                    "power,counts\n0.5,196\n1,358\n2,606\n4,931\n8,1266\n16,1552\n32,1744\n");
    const auto cfg = write_config(dir, "fit.json",
                                  R"({"version": 1, "fit": {"kind": "saturation", "data": "sat.csv"}})");
    const auto r = cli({"fit", "-c", cfg, "-o", (dir / "out").string()});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("p_sat") != std::string::npos);
    const auto fit = fit_result_from_json(read_text_file((dir / "out" / "fit.json").string()));
    CHECK(fit.value("p_sat") == doctest::Approx(4.6).epsilon(0.05));

    // malformed rows name the file and line
    write_text_file((dir / "bad.csv").string(), "power,counts\n0.5,196\n1,3x8\n");
    const auto bad = cli({"fit", "-c", cfg, "--data", (dir / "bad.csv").string()});
    CHECK(bad.code == exit_data);
    CHECK(bad.err.find("bad.csv:3") != std::string::npos);

    // too few points is a data error as well
    write_text_file((dir / "short.csv").string(), "0.5,196\n1,358\n");
    CHECK(cli({"fit", "-c", cfg, "--data", (dir / "short.csv").string()}).code == exit_data);

    CHECK(cli({"fit", "-c", cfg, "--data", (dir / "nope.csv").string()}).code == exit_io);
}

TEST_CASE("an unconverged fit exits with code 5") {
    const auto dir = testsupport::scratch_dir("cli_noconv");
    SpectrumRecord s;
    for (int i = 0; i < 201; ++i) {
        s.x.push_back(2817.0 + 0.01 * i);
        s.intensity.push_back(voigt(s.x.back(), VoigtParams{2818.0, 0.08, 0.064, 1000.0}));
    }
    std::ostringstream os;
    write_spectrum_csv(os, s);
    write_text_file((dir / "line.csv").string(), os.str());
    const auto ok = write_config(dir, "ok.json", R"({"version": 1, "fit": {"kind": "voigt", "data": "line.csv"}})");
    CHECK(cli({"fit", "-c", ok, "-o", dir.string()}).code == exit_ok);
    const auto capped = write_config(
        dir, "capped.json", R"({"version": 1, "fit": {"kind": "voigt", "data": "line.csv", "max_iterations": 1}})");
    const auto r = cli({"fit", "-c", capped, "-o", dir.string()});
    CHECK(r.code == exit_not_converged);
    CHECK(r.out.find("NOT converged") != std::string::npos);
    CHECK(fs::exists(dir / "fit.json"));
}
