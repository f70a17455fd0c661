#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_binary() {
    const char* p = std::getenv("MODISPERSE_CLI");
    REQUIRE_MESSAGE(p != nullptr, "MODISPERSE_CLI must point at the CLI binary");
    return p;
}

std::string work_dir() {
    static std::string dir = [] {
        std::string d = "/tmp/modisperse_cli_test";
        const int rc = std::system(("rm -rf " + d + " && mkdir -p " + d).c_str());
        REQUIRE(rc == 0);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE_MESSAGE(is.good(), ("missing file: " + path).c_str());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("cli exit codes") {
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
    CHECK(run_cli("path") == 2);  // --out is required
    CHECK(run_cli("path --kind nonsense --out " + work_dir() + "/x.csv") == 2);
    // invalid parameter values are usage errors: fbm requires 0 < H < 1
    CHECK(run_cli("path --kind fbm --hurst 7 --out " + work_dir() + "/x.csv") == 2);
}

TEST_CASE("cli linear path emits exact rows") {
    const std::string out = work_dir() + "/lin.csv";
    REQUIRE(run_cli("path --kind linear --slope 1 --n 4 --horizon 2 --out " + out) == 0);
    const std::string got = slurp(out);
    CHECK(got == "t,w\n0,0\n0.5,0.5\n1,1\n1.5,1.5\n2,2\n");
    // a manifest lands next to the output
    CHECK(slurp(out + ".manifest.json").find("\"command\": \"path\"") != std::string::npos);
}

TEST_CASE("cli outputs are deterministic across reruns and thread counts") {
    const std::string d = work_dir();
    const std::string base =
        "irregularity --kind brownian --seed 5 --n 2048 --pair-depth 8 --a-decades 2 ";
    REQUIRE(run_cli(base + "--threads 1 --out " + d + "/irr_a.json") == 0);
    REQUIRE(run_cli(base + "--threads 4 --out " + d + "/irr_b.json") == 0);
    CHECK(slurp(d + "/irr_a.json") == slurp(d + "/irr_b.json"));
    // manifests exclude the thread count, so they agree byte-for-byte too
    CHECK(slurp(d + "/irr_a.json.manifest.json").find("--threads") == std::string::npos);

    // rerun from the manifest reproduces the output file exactly
    const std::string before = slurp(d + "/irr_a.json");
    REQUIRE(run_cli("rerun --manifest " + d + "/irr_a.json.manifest.json --threads 3") == 0);
    CHECK(slurp(d + "/irr_a.json") == before);
}

TEST_CASE("cli solve trace has the documented columns") {
    const std::string out = work_dir() + "/trace.csv";
    REQUIRE(run_cli("solve --kind brownian --seed 2 --n 512 --K 8 --T 0.25 "
                    "--step 0.03125 --tol 1e-9 --out " + out) == 0);
    const std::string got = slurp(out);
    CHECK(got.rfind("t,l2,drift,remainder,iters\n", 0) == 0);
    // rerun bit-identity for a solver output
    const std::string before = got;
    REQUIRE(run_cli("rerun --manifest " + out + ".manifest.json") == 0);
    CHECK(slurp(out) == before);
}

TEST_CASE("cli probe csv carries the probe schema") {
    const std::string out = work_dir() + "/probe.csv";
    REQUIRE(run_cli("operator --mode probe --kind brownian --seed 3 --n 512 --K 8 "
                    "--samples 4 --pair-depth 2 --out " + out) == 0);
    CHECK(slurp(out).rfind("K,alpha,beta,s,t,ratio_max,ratio_median\n", 0) == 0);
}

TEST_CASE("cli reads options from a config file") {
    const std::string d = work_dir();
    const std::string cfg = d + "/path.cfg";
    {
        std::ofstream os(cfg);
        os << "[path]\n"
           << "kind=linear\n"
           << "slope=1\n"
           << "n=4\n"
           << "horizon=2\n"
           << "out=" << d << "/cfg_out.csv\n";
    }
    REQUIRE(run_cli("--config " + cfg + " path") == 0);
    CHECK(slurp(d + "/cfg_out.csv") == slurp(d + "/lin.csv"));
}
