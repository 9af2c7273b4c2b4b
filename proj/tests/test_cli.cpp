#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcl/report_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

namespace fs = std::filesystem;
using qcl::json;

namespace {

std::string qcl_bin() {
    const char* p = std::getenv("QCL_BIN");
    REQUIRE_MESSAGE(p != nullptr, "QCL_BIN must point at the qcl executable");
    return p;
}

int run(const std::string& args) {
    const int rc = std::system((qcl_bin() + " " + args + " >/dev/null 2>&1").c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qcl_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("critical subcommand reports Theorem-1 counts") {
    const fs::path dir = fresh_dir("critical");
    CHECK(run("--outdir " + dir.string() + " critical --label su2:j=3") == 0);
    const json j = json::parse(slurp(dir / "critical_su2_j_3.json"));
    CHECK(j["suboptima_count"] == 3);
    CHECK(j["local_maxima_count"] == 4);
    CHECK(j["saddle_count"] == 0);
    // round trip: table exists too
    CHECK(fs::exists(dir / "critical_su2_j_3.txt"));
}

TEST_CASE("scan-su2 emits the expected CSV shape") {
    const fs::path dir = fresh_dir("scan");
    CHECK(run("--outdir " + dir.string() + " scan-su2 --j 7/2 --resolution 1024") == 0);
    const fs::path csv = dir / "scan_su2_su2_j_7_2.csv";
    const std::string text = slurp(csv);

    std::istringstream lines(text);
    std::string line;
    int rows = -1; // header
    std::string first_data;
    while (std::getline(lines, line)) {
        if (rows == 0) first_data = line;
        ++rows;
    }
    CHECK(rows == 1024);
    CHECK(text.rfind("beta,J\n", 0) == 0);
    CHECK(first_data == "0,1"); // max J = 1 at beta = 0

    // JSON sidecar round-trips with the same values
    const json meta = json::parse(slurp(dir / "scan_su2_su2_j_7_2.json"));
    CHECK(meta["values"].size() == 1024);
    CHECK(meta["config"]["resolution"] == 1024);
    CHECK(meta["label"] == "su2:j=7/2");
}

TEST_CASE("identical command and seed give identical bytes") {
    const fs::path d1 = fresh_dir("repro1"), d2 = fresh_dir("repro2");
    const std::string cmd = " kinematic-flow --j 1 --starts 6 --seed 42 --target identity";
    CHECK(run("--outdir " + d1.string() + cmd) == 0);
    CHECK(run("--outdir " + d2.string() + cmd) == 0);
    CHECK(slurp(d1 / "kinematic_flow_j2_2.json") == slurp(d2 / "kinematic_flow_j2_2.json"));

    CHECK(run("--outdir " + d1.string() + " scan-su3 --r1 5 --r2 2 --resolution 64") == 0);
    CHECK(run("--outdir " + d2.string() + " scan-su3 --r1 5 --r2 2 --resolution 64") == 0);
    CHECK(slurp(d1 / "scan_su3_su3_r1_5_r2_2.csv") == slurp(d2 / "scan_su3_su3_r1_5_r2_2.csv"));
}

TEST_CASE("controllability and grape consume the problem JSON schema") {
    const fs::path dir = fresh_dir("problem");
    const auto ops = qcl::build_spin_operators(qcl::Spin(2));

    json prob;
    prob["dim"] = 3;
    prob["h0"] = qcl::mat_to_json(ops.jz * ops.jz);
    prob["controls"] = json::array({qcl::mat_to_json(ops.jx), qcl::mat_to_json(ops.jy)});
    prob["target"] = qcl::mat_to_json(qcl::Mat::Identity(3, 3));
    prob["experiment"] = {{"starts", 3},      {"steps", 16},        {"dt", 0.4},
                          {"seed", 7},        {"max_iterations", 300}};
    qcl::write_json(dir / "problem.json", prob);

    CHECK(run("controllability --problem " + (dir / "problem.json").string()) == 0);

    CHECK(run("--outdir " + dir.string() + " grape --problem " +
              (dir / "problem.json").string()) == 0);
    const std::string lines = slurp(dir / "problem_outcomes.jsonl");
    int count = 0;
    std::istringstream is(lines);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) {
            const json o = json::parse(line); // every line re-parses
            CHECK(o.contains("final_J"));
            ++count;
        }
    CHECK(count == 3);
    CHECK(fs::exists(dir / "problem_outcomes.meta.json"));
}

TEST_CASE("figures fig1 writes curves whose maxima count four") {
    const fs::path dir = fresh_dir("fig1");
    CHECK(run("--outdir " + dir.string() + " figures --which fig1") == 0);
    CHECK(fs::exists(dir / "fig1_d3.csv"));
    CHECK(fs::exists(dir / "fig1_d7_2.csv"));
    CHECK(fs::exists(dir / "fig1.svg"));
    const json meta = json::parse(slurp(dir / "fig1.json"));
    CHECK(meta["local_maxima"]["su2:j=3"] == 4);
    CHECK(meta["local_maxima"]["su2:j=7/2"] == 4);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("critical --label su5:bogus") == 1);
    CHECK(run("no-such-subcommand") != 0);
    CHECK(run("scan-su2 --j 0.3") == 1);
    CHECK(run("grape --problem /nonexistent.json") == 1);
}

TEST_CASE("character subcommand evaluates chi") {
    CHECK(run("character --label su2:j=3 --beta 0.0") == 0);
    CHECK(run("character --label su3:r1=6,r2=1 --theta1 0 --theta2 0") == 0);
}
