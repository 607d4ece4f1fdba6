// Process-level checks of the command-line driver: exit codes, deterministic
// output, and the documented CSV shapes. Invoked by ctest with the CLI path
// as the only argument.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAILED", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-cli>\n");
        return 2;
    }
    std::string cli = argv[1];
    fs::path dir = fs::temp_directory_path() / "slugflow_cli_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (dir / name).string(); };

    // front: closed-form values and determinism
    expect(run(cli + " front --t-inj 1 --x 2:100:5:log --output " + at("f1.csv")) == 0,
           "front exits 0");
    expect(run(cli + " front --t-inj 1 --x 2:100:5:log --output " + at("f2.csv")) == 0,
           "front rerun exits 0");
    std::string f1 = slurp(at("f1.csv"));
    expect(f1 == slurp(at("f2.csv")), "front output is byte-identical across runs");
    expect(f1.find("x,phi,zeta,slope\n2,2,1,1\n") != std::string::npos,
           "front row at x_A matches the closed form");

    // empty grid request: header-only CSV
    expect(run(cli + " front --t-inj 1 --x 0.1:0.5:3 --output " + at("empty.csv")) == 0,
           "front below x_A exits 0");
    expect(slurp(at("empty.csv")) == "x,phi,zeta,slope\n", "header-only CSV for a vacuous grid");

    // check-shock on the leading Buckley-Leverett front
    expect(run(cli + " check-shock --s-minus 0.7071067811865476 --s-plus 0 --c-minus 0"
                     " --c-plus 0 > " + at("shock.csv")) == 0,
           "check-shock exits 0");
    expect(slurp(at("shock.csv")).find(",1,ok") != std::string::npos,
           "front shock verdict is ok");

    // usage errors exit 2
    expect(run(cli + " check-shock --s-minus 0.5 2>/dev/null") == 2,
           "missing required flags exit 2");
    expect(run(cli + " nonsense 2>/dev/null") == 2, "unknown subcommand exits 2");

    // config errors exit 2 and name the offending field
    {
        std::ofstream(at("bad.json")) << "{\"t_inj\": -1.0}";
        expect(run(cli + " solve --config " + at("bad.json") + " 2> " + at("bad.err")) == 2,
               "invalid config exits 2");
        expect(slurp(at("bad.err")).find("t_inj") != std::string::npos,
               "error message names the field");
    }

    // validate-model: pass and fail paths
    expect(run(cli + " validate-model > /dev/null") == 0, "reference model validates");
    expect(run(cli + " validate-model --m 0 > /dev/null") == 1,
           "flat-in-c model fails validation with exit 1");

    // compare: identical file yields zero distance
    {
        std::ofstream(at("g.csv")) << "x,t,s,c\n0.5,1,0.25,0.75\n1.5,1,0.5,0.5\n";
        expect(run(cli + " compare --first " + at("g.csv") + " --second " + at("g.csv") +
                   " --field s > " + at("cmp.out")) == 0,
               "compare exits 0");
        expect(slurp(at("cmp.out")) == "0\n", "identical fields compare to 0");
    }

    // solve: bundle + determinism on a small configuration
    {
        std::ofstream(at("cfg.json"))
            << "{\"nx\": 16, \"nt\": 8, \"n_ta\": 64, \"n_jouguet\": 64, \"output_dir\": \""
            << at("out1") << "\"}";
        expect(run(cli + " solve --config " + at("cfg.json") + " > /dev/null") == 0,
               "solve exits 0 with all checks passing");
        expect(run(cli + " solve --config " + at("cfg.json") + " --output-dir " + at("out2") +
                   " > /dev/null") == 0,
               "solve rerun exits 0");
        expect(slurp(at("out1") + "/field_physical.csv") == slurp(at("out2") + "/field_physical.csv"),
               "physical field CSV is byte-identical across runs");
        expect(slurp(at("out1") + "/zeta_front.csv") == slurp(at("out2") + "/zeta_front.csv"),
               "front CSV is byte-identical across runs");
    }

    // solve with the dissipative-oracle block: the report gains the L1 table
    {
        std::ofstream(at("cfg_fv.json"))
            << "{\"nx\": 16, \"nt\": 8, \"n_ta\": 64, \"n_jouguet\": 64,"
            << " \"fv\": {\"eps\": [0.01, 0.005], \"t_final\": 1.2, \"length\": 2.2},"
            << " \"output_dir\": \"" << at("outfv") << "\"}";
        expect(run(cli + " solve --config " + at("cfg_fv.json") + " > /dev/null") == 0,
               "solve with the fv block exits 0");
        std::string report = slurp(at("outfv") + "/report.txt");
        expect(report.find("dissipative-oracle comparison") != std::string::npos,
               "report gains the L1-vs-eps table");
        expect(report.find("fv-l1-monotone") != std::string::npos,
               "fv checks appear in the report");
    }

    fs::remove_all(dir);
    std::printf("%s\n", failures == 0 ? "ALL CLI CHECKS PASSED" : "CLI CHECKS FAILED");
    return failures == 0 ? 0 : 1;
}
