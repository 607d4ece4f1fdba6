#ifndef SLUGFLOW_CONFIG_HPP
#define SLUGFLOW_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "slugflow/model.hpp"

namespace slugflow {

struct FVBlock {
    std::vector<double> eps = {4e-3, 2e-3, 1e-3};  // sweep, coarse to fine
    double dx_over_eps = 1.5;                      // dx proportional to eps
    double cfl = 0.4;
    double length = 2.5;
    double t_final = 1.5;
};

/// Flat solver configuration (JSON file, unknown keys rejected).
struct SolveConfig {
    double M0 = 1.0;
    double m = 1.0;
    double Gamma = 2.0;
    double beta = 1.0;
    double t_inj = 1.0;
    int nx = 120;
    int nt = 80;
    double x_max = 0.0;  // 0 = auto (3 x_A)
    double t_max = 0.0;  // 0 = auto (front reaches ~0.8 x_max)
    double root_tol = 1e-12;
    double ode_rtol = 1e-9;
    int n_ta = 128;
    int n_jouguet = 128;
    std::string output_dir = "out";
    std::optional<FVBlock> fv;

    ModelPair model() const { return {FluidModel(M0, m), AdsorptionModel(Gamma, beta)}; }
    /// serialization used for the report echo (deterministic key order)
    std::string to_json() const;
};

SolveConfig load_config(const std::string& path);
SolveConfig parse_config(const std::string& json_text);

}  // namespace slugflow

#endif
