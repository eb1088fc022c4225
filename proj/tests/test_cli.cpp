#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SGL_BIN
#define SGL_BIN "sgl"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SGL_BIN) + " " + args + " >/dev/null 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

int run_capture(const std::string& args, std::string& err) {
    const std::string path = "/tmp/sgl_cli_err.txt";
    const std::string cmd = std::string(SGL_BIN) + " " + args + " >/dev/null 2>" + path;
    const int rc = std::system(cmd.c_str());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    err = ss.str();
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

} // namespace

TEST_CASE("verify passes and unknown commands fail with usage") {
    CHECK(run("verify") == 0);
    CHECK(run("--version") == 0);
    CHECK(run("frobnicate") == 1);
    CHECK(run("egt unknown-action") == 1);
    CHECK(run("egt stationary --no-such-flag 1") == 1);
}

TEST_CASE("all three stationary methods run from the command line") {
    const std::string base = "egt stationary --n 5 --gamma 0.5 --w1 0.1 --w2 0.1 --eps 0.1 ";
    REQUIRE(run(base + "--method exact --out /tmp/sgl_m_exact.csv") == 0);
    REQUIRE(run(base + "--method tree --out /tmp/sgl_m_tree.csv") == 0);
    REQUIRE(run(base + "--method mc --steps 400000 --seed 5 --out /tmp/sgl_m_mc.csv") == 0);
    // exact and tree agree within the cross-method contract
    auto second_field = [](const std::string& body, int row) {
        std::stringstream ss(body);
        std::string line;
        for (int i = 0; i <= row; ++i) std::getline(ss, line);
        return std::stod(line.substr(line.find(',') + 1));
    };
    const std::string exact_body = slurp("/tmp/sgl_m_exact.csv");
    const std::string tree_body = slurp("/tmp/sgl_m_tree.csv");
    for (int row = 1; row <= 5; ++row)
        CHECK(std::fabs(second_field(exact_body, row) - second_field(tree_body, row)) <= 1e-9);
}

TEST_CASE("identical seed and config give byte-identical outputs") {
    const std::string base =
        "egt stationary --n 6 --gamma 0.5 --w1 0.1 --w2 0.1 --eps 0.05 --seed 7 --out ";
    REQUIRE(run(base + "/tmp/sgl_det_a.csv") == 0);
    REQUIRE(run(base + "/tmp/sgl_det_b.csv") == 0);
    CHECK(slurp("/tmp/sgl_det_a.csv") == slurp("/tmp/sgl_det_b.csv"));
    CHECK(slurp("/tmp/sgl_det_a.csv.summary.json") == slurp("/tmp/sgl_det_b.csv.summary.json"));
    // manifests differ only in the echoed --out value; normalize it away
    std::string ma = slurp("/tmp/sgl_det_a.csv.manifest.json");
    std::string mb = slurp("/tmp/sgl_det_b.csv.manifest.json");
    const auto scrub = [](std::string s, const std::string& what) {
        std::string out;
        std::stringstream ss(s);
        std::string line;
        while (std::getline(ss, line))
            if (line.find(what) == std::string::npos) out += line + "\n";
        return out;
    };
    CHECK(scrub(ma, "sgl_det_") == scrub(mb, "sgl_det_"));

    // simulate twice with the same seed: identical trajectories
    const std::string sim =
        "egt simulate --n 12 --gamma 0.5 --eps 0.1 --steps 500 --seed 9 --mode gd --out ";
    REQUIRE(run(sim + "/tmp/sgl_sim_a.csv") == 0);
    REQUIRE(run(sim + "/tmp/sgl_sim_b.csv") == 0);
    CHECK(slurp("/tmp/sgl_sim_a.csv") == slurp("/tmp/sgl_sim_b.csv"));
}

TEST_CASE("output files begin with a header row and a manifest appears") {
    REQUIRE(run("sde run --alpha fixed:0.5 --sigma 0 --dt 0.005 --t-end 1 --out /tmp/sgl_tr.csv") ==
            0);
    const std::string head = slurp("/tmp/sgl_tr.csv").substr(0, 15);
    CHECK(head.rfind("t,w1,w2,alpha", 0) == 0);
    CHECK(!slurp("/tmp/sgl_tr.csv.manifest.json").empty());
}

TEST_CASE("config file values load and command-line flags win") {
    write_file("/tmp/sgl_cfg.txt", "gamma = 0.5\nn = 6\n# comment line\neps = 0.05\n");
    REQUIRE(run("egt stationary --config /tmp/sgl_cfg.txt --w1 0.1 --w2 0.1 --out "
                "/tmp/sgl_cfg_a.csv") == 0);
    const std::string manifest_a = slurp("/tmp/sgl_cfg_a.csv.manifest.json");
    CHECK(manifest_a.find("\"gamma\": \"0.5\"") != std::string::npos);

    REQUIRE(run("egt stationary --config /tmp/sgl_cfg.txt --gamma 0.3 --w1 0.1 --w2 0.1 --out "
                "/tmp/sgl_cfg_b.csv") == 0);
    const std::string manifest_b = slurp("/tmp/sgl_cfg_b.csv.manifest.json");
    CHECK(manifest_b.find("\"gamma\": \"0.3\"") != std::string::npos);
    CHECK(slurp("/tmp/sgl_cfg_a.csv") != slurp("/tmp/sgl_cfg_b.csv"));

    // empty file: all defaults
    write_file("/tmp/sgl_cfg_empty.txt", "");
    CHECK(run("egt stationary --config /tmp/sgl_cfg_empty.txt --w1 0.1 --w2 0.1 --out "
              "/tmp/sgl_cfg_c.csv") == 0);

    // malformed line reports its number; unknown keys are rejected
    write_file("/tmp/sgl_cfg_bad.txt", "gamma = 0.5\ngamma\n");
    std::string err;
    CHECK(run_capture("egt stationary --config /tmp/sgl_cfg_bad.txt --out /tmp/sgl_x.csv", err) ==
          1);
    CHECK(err.find("line 2") != std::string::npos);
    write_file("/tmp/sgl_cfg_unk.txt", "flux_capacitor = 1\n");
    CHECK(run_capture("egt stationary --config /tmp/sgl_cfg_unk.txt --out /tmp/sgl_x.csv", err) ==
          1);
    CHECK(err.find("flux_capacitor") != std::string::npos);
}

TEST_CASE("feature pipeline consumes the documented CSV layout") {
    write_file("/tmp/sgl_feat.csv",
               "id,label,pred,shape,tint\n"
               "0,1,1,1,1\n"
               "1,1,1,1,0\n"
               "2,-1,-1,0,0\n"
               "3,-1,-1,0,1\n"
               "4,1,1,1,1\n"
               "5,1,1,1,0\n"
               "6,-1,-1,0,0\n"
               "7,-1,-1,0,1\n");
    REQUIRE(run("feature bias --in /tmp/sgl_feat.csv --alpha tint --beta shape --out "
                "/tmp/sgl_bias.json") == 0);
    const std::string rep = slurp("/tmp/sgl_bias.json");
    CHECK(rep.find("\"shortcut_bias\": 0.0") != std::string::npos);
    CHECK(rep.find("\"conflict_count\": 4") != std::string::npos);
    CHECK(run("feature equiv --in /tmp/sgl_feat.csv --alpha tint --beta shape --out "
              "/tmp/sgl_eq.json") == 0);
    CHECK(run("feature classify --in /tmp/sgl_feat.csv") == 0);
    // degenerate feature request errors cleanly
    std::string err;
    CHECK(run_capture("feature bias --in /tmp/sgl_feat.csv --alpha shape --beta shape --out "
                      "/tmp/sgl_bad.json",
                      err) == 1);
    CHECK(err.find("EmptyConflictSet") != std::string::npos);
}

TEST_CASE("precondition violations exit 1 with the error code visible") {
    std::string err;
    CHECK(run_capture("egt stationary --n 4 --gamma 1.5 --out /tmp/sgl_g.csv", err) == 1);
    CHECK(err.find("ParamError") != std::string::npos);
    CHECK(run_capture("sde run --tau 4 --dt 0.005 --alpha fixed:0.5 --out /tmp/sgl_h.csv", err) ==
          1);
    CHECK(err.find("StepSizeError") != std::string::npos);
}
