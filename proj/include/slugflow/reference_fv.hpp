#ifndef SLUGFLOW_REFERENCE_FV_HPP
#define SLUGFLOW_REFERENCE_FV_HPP

#include "slugflow/inverse_transform.hpp"
#include "slugflow/model.hpp"

namespace slugflow {

/// Configuration of the dissipative finite-volume oracle
///   s_t + f(s,c)_x = eps s_xx
///   (cs + a(c))_t + (c f(s,c))_x = eps (c s_x)_x + eps c_xx
/// with slug boundary data at the inlet and outflow extrapolation.
struct FVConfig {
    double eps = 1e-3;
    double dx = 1e-3;
    double cfl = 0.4;      // must be <= 0.4
    double length = 2.5;
    double t_final = 1.5;
    double t_inj = 1.0;
    double c_inj = 1.0;
    double s_inlet = 1.0;
    double s_init = 0.0;
};

struct FVResult {
    GridField field;          // snapshot at t_final on cell centers
    double mass_error_s = 0;  // |sum s dx - (initial + boundary fluxes)|
    double mass_error_m = 0;  // same for the chemical conserved density
    long steps = 0;
};

/// Explicit conservative update: local Lax-Friedrichs fluxes for the pair
/// (s, m = cs + a(c)) plus centered interface differences for the eps terms;
/// per-cell recovery of c from m by the monotone root.
FVResult run_fv(const ModelPair& model, const FVConfig& cfg);

/// Monotone recovery of c from m = c s + a(c); cells with s <= 1e-12 use
/// a(c) = m alone.
double recover_c(const AdsorptionModel& ads, double s, double m);

}  // namespace slugflow

#endif
