#include "scratch.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

// Runs the CLI with args through the shell, capturing stdout and stderr.
Run cli(const Scratch& dir, const std::string& args) {
    const std::string out = dir / ".stdout", err = dir / ".stderr";
    const std::string cmd = std::string("'") + MIMOCEP_CLI + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string q(const std::string& s) { return "'" + s + "'"; }

const std::string kFixture = std::string(MIMOCEP_CONFIG_DIR) + "/fixture_3x3.json";

}  // namespace

TEST_CASE("simulate, cepstrum and exact on the fixture") {
    Scratch dir;
    Run r = cli(dir, "simulate --config " + q(kFixture) + " --out " + q(dir / "sim") + " --samples 16384");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "sim/u.csv"));
    CHECK(fs::exists(dir / "sim/y.csv"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "sim/manifest.json"));
    for (const char* key : {"command", "config_path", "input_paths", "output_paths", "seed", "tool_version",
                            "timestamp", "argv"})
        CHECK(manifest.contains(key));
    CHECK(manifest["seed"] == 1);

    r = cli(dir, "cepstrum --u " + q(dir / "sim/u.csv") + " --y " + q(dir / "sim/y.csv") + " --out " +
                     q(dir / "data.csv"));
    REQUIRE(r.code == 0);
    r = cli(dir, "exact --config " + q(kFixture) + " --out " + q(dir / "exact.csv"));
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "exact.poles.json"));
    const auto pz = nlohmann::json::parse(slurp(dir / "exact.poles.json"));
    CHECK(pz["poles"].size() == 5);
    CHECK(pz["zeros"].size() == 4);

    r = cli(dir, "compare " + q(dir / "data.csv") + " " + q(dir / "exact.csv") + " --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.contains("distance"));
    REQUIRE(j.contains("per_k"));
    CHECK(j["per_k"].size() == 50);
    CHECK(j["distance"].get<double>() < 0.05);
    for (std::size_t k = 0; k < 20; ++k) CHECK(std::abs(j["per_k"][k]["diff"].get<double>()) < 5e-3);
}

TEST_CASE("identical input and output give a vanishing cepstrum") {
    Scratch dir;
    REQUIRE(cli(dir, "simulate --config " + q(kFixture) + " --out " + q(dir.path().string()) + " --samples 8192").code == 0);
    REQUIRE(cli(dir, "cepstrum --u " + q(dir / "u.csv") + " --y " + q(dir / "u.csv") + " --out " + q(dir / "c.csv"))
                .code == 0);
    const Run r = cli(dir, "compare " + q(dir / "c.csv") + " " + q(dir / "c.csv") + " --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["distance"].get<double>() == 0.0);
    for (const auto& e : j["per_k"]) CHECK(std::abs(e["a"].get<double>()) < 1e-12);
}

TEST_CASE("runs are deterministic and byte-identical") {
    Scratch dir;
    for (const char* sub : {"a", "b"}) {
        REQUIRE(cli(dir, "simulate --config " + q(kFixture) + " --out " + q(dir / sub) + " --samples 8192 --seed 7")
                    .code == 0);
        REQUIRE(cli(dir, std::string("cepstrum --u ") + q(dir / sub + std::string("/u.csv")) + " --y " +
                             q(dir / sub + std::string("/y.csv")) + " --out " + q(dir / sub + std::string("/c.csv")))
                    .code == 0);
    }
    for (const char* f : {"u.csv", "y.csv", "c.csv"}) {
        const std::string a = slurp(dir / (std::string("a/") + f)), b = slurp(dir / (std::string("b/") + f));
        CHECK(!a.empty());
        CHECK(a == b);
    }
    REQUIRE(cli(dir, "simulate --config " + q(kFixture) + " --out " + q(dir / "c") + " --samples 8192 --seed 8").code ==
            0);
    CHECK(slurp(dir / "a/u.csv") != slurp(dir / "c/u.csv"));
}

TEST_CASE("CSTR scenario output") {
    Scratch dir;
    const std::string cfg = std::string(MIMOCEP_CONFIG_DIR) + "/cstr_closed_loop.json";
    const Run r = cli(dir, "simulate --config " + q(cfg) + " --out " + q(dir.path().string()) + " -N 300");
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "scenario.csv");
    CHECK(csv.rfind("t_min,q,Tj,CA,T\n", 0) == 0);
    std::size_t lines = 0;
    for (const char ch : csv) lines += ch == '\n';
    CHECK(lines == 301);
    REQUIRE(cli(dir, "cepstrum --signal " + q(dir / "scenario.csv") + " --u-columns CA,T --K 10 --seglen 128 --grid 256"
                     " --out " + q(dir / "ca_t.csv"))
                .code == 0);
    REQUIRE(cli(dir, "cepstrum --u " + q(dir / "scenario.csv") + " --u-columns q,Tj --y " + q(dir / "scenario.csv") +
                     " --y-columns CA,T --range 0:256 --seglen 64 --grid 128 --K 10 --out " + q(dir / "sys.csv"))
                .code == 0);
}

TEST_CASE("errors map to exit codes without partial output") {
    Scratch dir;
    Run r = cli(dir, "simulate --config " + q(kFixture) + " --out " + q(dir / "none") + " --samples 0");
    CHECK(r.code == 2);
    CHECK(r.err.find("positive") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "none"));

    r = cli(dir, "simulate --config " + q(dir / "missing.json") + " --out " + q(dir / "none"));
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "none"));

    spit(dir / "unstable.json", R"({"n": 1, "m": 1, "l": 1, "A": [1.5], "B": [1], "C": [1], "D": [0]})");
    r = cli(dir, "exact --config " + q(dir / "unstable.json") + " --out " + q(dir / "u.csv"));
    CHECK(r.code == 2);
    CHECK(r.err.find("stable") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "u.csv"));

    spit(dir / "typo.json", R"({"n": 1, "m": 1, "l": 1, "A": [0.5], "B": [1], "C": [1], "D": [0], "Bogus": 1})");
    r = cli(dir, "exact --config " + q(dir / "typo.json") + " --out " + q(dir / "t.csv"));
    CHECK(r.code == 2);
    CHECK(r.err.find("Bogus") != std::string::npos);

    REQUIRE(cli(dir, "simulate --config " + q(kFixture) + " --out " + q(dir / "sim") + " --samples 4096").code == 0);
    r = cli(dir, "cepstrum --u " + q(dir / "sim/u.csv") + " --u-columns u0,u1 --y " + q(dir / "sim/y.csv") +
                     " --out " + q(dir / "c.csv"));
    CHECK(r.code == 2);
    CHECK(r.err.find("m != l") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "c.csv"));

    r = cli(dir, "cepstrum --signal " + q(dir / "sim/u.csv") + " --grid 1000 --out " + q(dir / "c.csv"));
    CHECK(r.code == 2);

    r = cli(dir, "compare " + q(dir / "nope.csv") + " " + q(dir / "nope.csv"));
    CHECK(r.code == 2);

    r = cli(dir, "frobnicate");
    CHECK(r.code == 2);
}

TEST_CASE("compare weights and length mismatch") {
    Scratch dir;
    spit(dir / "m.json", R"({"n": 1, "m": 1, "l": 1, "A": [0.5], "B": [1], "C": [1], "D": [1]})");
    REQUIRE(cli(dir, "exact --config " + q(dir / "m.json") + " --K 5 --out " + q(dir / "a.csv")).code == 0);
    spit(dir / "n.json", R"({"n": 1, "m": 1, "l": 1, "A": [0.3], "B": [1], "C": [1], "D": [1]})");
    REQUIRE(cli(dir, "exact --config " + q(dir / "n.json") + " --K 5 --out " + q(dir / "b.csv")).code == 0);
    REQUIRE(cli(dir, "exact --config " + q(dir / "n.json") + " --K 4 --out " + q(dir / "short.csv")).code == 0);

    Run r = cli(dir, "compare " + q(dir / "a.csv") + " " + q(dir / "b.csv") + " --json");
    REQUIRE(r.code == 0);
    const double plain = nlohmann::json::parse(r.out)["distance"].get<double>();
    CHECK(plain > 0.0);
    r = cli(dir, "compare " + q(dir / "a.csv") + " " + q(dir / "b.csv") + " --weights 4,4,4,4,4 --json");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["distance"].get<double>() == doctest::Approx(2.0 * plain));
    r = cli(dir, "compare " + q(dir / "a.csv") + " " + q(dir / "b.csv") + " --weights 1,2");
    CHECK(r.code == 2);
    r = cli(dir, "compare " + q(dir / "a.csv") + " " + q(dir / "short.csv"));
    CHECK(r.code == 2);
}
