// Command-line driver: solve, front, characteristics, check-shock, compare,
// validate-model. Exit codes: 0 success, 1 check failure, 2 usage/config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slugflow/admissibility.hpp"
#include "slugflow/config.hpp"
#include "slugflow/inverse_transform.hpp"
#include "slugflow/model.hpp"
#include "slugflow/reference_fv.hpp"
#include "slugflow/solver.hpp"
#include "slugflow/u_solution.hpp"
#include "slugflow/zeta_solution.hpp"

using namespace slugflow;

namespace {

struct ModelFlags {
    double M0 = 1.0, m = 1.0, Gamma = 2.0, beta = 1.0;
    void attach(CLI::App* app) {
        app->add_option("--M0", M0, "Corey mobility scale M0 > 0");
        app->add_option("--m", m, "mobility concentration slope m >= 0");
        app->add_option("--Gamma", Gamma, "Langmuir capacity Gamma > 0");
        app->add_option("--beta", beta, "Langmuir curvature beta > 0");
    }
    ModelPair model() const { return {FluidModel(M0, m), AdsorptionModel(Gamma, beta)}; }
};

// grid spec START:END[:COUNT][:log|lin]
std::vector<double> parse_grid_spec(const std::string& spec) {
    std::vector<std::string> tok;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) tok.push_back(item);
    if (tok.size() < 2) throw std::invalid_argument("grid spec needs START:END[:COUNT][:log|lin]");
    double a = std::stod(tok[0]), b = std::stod(tok[1]);
    int count = 50;
    bool log_scale = false;
    for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "log") log_scale = true;
        else if (tok[i] == "lin") log_scale = false;
        else count = std::stoi(tok[i]);
    }
    if (count < 1 || b < a) throw std::invalid_argument("grid spec: bad range or count");
    if (log_scale && !(a > 0.0)) throw std::invalid_argument("grid spec: log scale needs START > 0");
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) {
        double w = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        xs.push_back(log_scale ? a * std::pow(b / a, w) : a + (b - a) * w);
    }
    return xs;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-analytical solver for two-phase chemical slug injection"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "run the full construction and write the bundle");
    std::string config_path, output_override;
    solve->add_option("--config", config_path, "JSON configuration file")->required();
    solve->add_option("--output-dir", output_override, "override the configured output directory");

    // validate-model
    auto* vm = app.add_subcommand("validate-model", "check the structural model assumptions");
    ModelFlags vm_flags;
    vm_flags.attach(vm);
    int vm_n = 64;
    vm->add_option("--n", vm_n, "sample grid resolution (>= 16)");

    // front
    auto* front = app.add_subcommand("front", "emit the curved chemical front as CSV");
    ModelFlags front_flags;
    front_flags.attach(front);
    double front_tinj = 1.0;
    std::string front_spec = "2:100:log", front_out;
    front->add_option("--t-inj", front_tinj, "injected slug potential volume");
    front->add_option("--x", front_spec, "abscissa grid START:END[:COUNT][:log|lin]");
    front->add_option("--output", front_out, "output file (default stdout)");

    // characteristics
    auto* chars = app.add_subcommand("characteristics", "emit the characteristic families as CSV");
    ModelFlags ch_flags;
    ch_flags.attach(chars);
    double ch_tinj = 1.0;
    int ch_nta = 128, ch_njg = 128;
    std::string ch_out;
    chars->add_option("--t-inj", ch_tinj, "injected slug potential volume");
    chars->add_option("--n-ta", ch_nta, "curves launched from the fan boundary");
    chars->add_option("--n-jouguet", ch_njg, "curves launched from the front per interval");
    chars->add_option("--output", ch_out, "output file (default stdout)");

    // check-shock
    auto* shock = app.add_subcommand("check-shock", "classify a shock and print residuals as CSV");
    ModelFlags sh_flags;
    sh_flags.attach(shock);
    double sm = 0, sp = 0, cm = 0, cp = 0, sv = 0;
    bool sv_given = false, run_orbit = false;
    shock->add_option("--s-minus", sm, "left saturation")->required();
    shock->add_option("--s-plus", sp, "right saturation")->required();
    shock->add_option("--c-minus", cm, "left concentration")->required();
    shock->add_option("--c-plus", cp, "right concentration")->required();
    shock->add_option("--v", sv, "shock velocity (default: from the saturation jump)")
        ->each([&](const std::string&) { sv_given = true; });
    shock->add_flag("--orbit", run_orbit, "also run the traveling-wave orbit oracle");

    // compare
    auto* cmp = app.add_subcommand("compare", "L1 distance between two grid CSV files");
    std::string cmp_a, cmp_b, cmp_field = "s";
    cmp->add_option("--first", cmp_a, "first grid CSV")->required();
    cmp->add_option("--second", cmp_b, "second grid CSV")->required();
    cmp->add_option("--field", cmp_field, "field to compare: s or c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*solve) {
            SolveConfig cfg = load_config(config_path);
            if (!output_override.empty()) cfg.output_dir = output_override;
            SolveSummary summary = run_solve(cfg);
            for (const auto& c : summary.checks)
                std::printf("[%s] %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str());
            if (!summary.all_pass()) {
                std::fprintf(stderr, "first failed check: %s\n", summary.first_failure.c_str());
                return 1;
            }
            return 0;
        }
        if (*vm) {
            auto rep = validate_assumptions(vm_flags.model(), vm_n);
            std::cout << rep.to_string();
            return rep.all_pass() ? 0 : 1;
        }
        if (*front) {
            ZetaField zf = build_zeta(front_flags.model(), front_tinj);
            std::ofstream file;
            write_front_csv(zf, parse_grid_spec(front_spec), open_sink(front_out, file));
            return 0;
        }
        if (*chars) {
            ModelPair model = ch_flags.model();
            ZetaField zf = build_zeta(model, ch_tinj);
            ConeBuildOptions opts;
            opts.n_ta = ch_nta;
            opts.n_jouguet = ch_njg;
            ConeSolution cone = build_cone(model, zf, opts);
            std::ofstream file;
            write_characteristics_csv(cone, open_sink(ch_out, file));
            return 0;
        }
        if (*shock) {
            ModelPair model = sh_flags.model();
            if (!sv_given) {
                if (sm == sp) throw std::invalid_argument("equal saturations need an explicit --v");
                sv = (model.fluid.f(sp, cp) - model.fluid.f(sm, cm)) / (sp - sm);
            }
            ShockData sh_data{sm, sp, cm, cp, sv};
            auto [r1, r2] = rh_residual(model, sh_data);
            ShockVerdict verdict = classify_shock(model, sh_data);
            std::printf("s_minus,s_plus,c_minus,c_plus,v,r1,r2,admissible,reason%s\n",
                        run_orbit ? ",orbit" : "");
            std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s", sm, sp, cm, cp, sv,
                        r1, r2, verdict.admissible ? 1 : 0, to_string(verdict.reason));
            if (run_orbit) {
                auto orbit = traveling_wave_orbit(model, sh_data);
                std::printf(",%s", to_string(orbit.status));
            }
            std::printf("\n");
            return 0;
        }
        if (*cmp) {
            if (cmp_field != "s" && cmp_field != "c")
                throw std::invalid_argument("--field must be 's' or 'c'");
            std::ifstream fa(cmp_a), fb(cmp_b);
            if (!fa) throw std::invalid_argument("cannot open '" + cmp_a + "'");
            if (!fb) throw std::invalid_argument("cannot open '" + cmp_b + "'");
            GridField a = read_grid_csv(fa), b = read_grid_csv(fb);
            std::printf("%.17g\n", compare_fields(a, b, cmp_field[0]));
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
