#ifndef SLUGFLOW_SOLVER_HPP
#define SLUGFLOW_SOLVER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "slugflow/config.hpp"
#include "slugflow/inverse_transform.hpp"
#include "slugflow/u_solution.hpp"

namespace slugflow {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured quantity (worst case over samples)
    double threshold = 0.0;  // pass iff value <= threshold (or boolean checks)
    std::string note;
};

struct FVCompareRow {
    double eps, dx, l1_s, l1_c, front_error;
};

struct SolveSummary {
    SolveConfig effective;
    std::vector<CheckResult> checks;
    std::vector<FVCompareRow> fv_rows;
    std::string first_failure;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// End-to-end solve: builds the semi-analytical solution, writes the artifact
/// bundle (zeta_front.csv, characteristics.csv, field_lagrange.csv,
/// field_physical.csv, report.txt) into cfg.output_dir and returns the check
/// summary. Throws std::invalid_argument on configuration errors.
SolveSummary run_solve(const SolveConfig& cfg);

/// Location of the chemical front in physical coordinates at time t.
double front_position_at_time(const ConeSolution& sol, double t);

/// Equal-area (conservation-based) front locator for a dissipative field,
/// measured against the sharp analytic field on the same grid.
double equal_area_front_position(const GridField& fv, const GridField& ana, double x_hint);

/// CSV emitters shared by the solve bundle and the CLI subcommands.
void write_front_csv(const ZetaField& zf, const std::vector<double>& xs, std::ostream& os);
void write_characteristics_csv(const ConeSolution& cone, std::ostream& os);
void write_lagrange_field_csv(const ConeSolution& cone, int nx, int nphi, double x_max,
                              double phi_max, std::ostream& os);

/// Parse a GridField back from its CSV form (inverse of GridField::write_csv).
GridField read_grid_csv(std::istream& is);

}  // namespace slugflow

#endif
