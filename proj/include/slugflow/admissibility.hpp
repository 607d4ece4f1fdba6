#ifndef SLUGFLOW_ADMISSIBILITY_HPP
#define SLUGFLOW_ADMISSIBILITY_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "slugflow/model.hpp"

namespace slugflow {

/// One-sided states and velocity of a discontinuity in original coordinates.
struct ShockData {
    double s_minus = 0.0;
    double s_plus = 0.0;
    double c_minus = 0.0;
    double c_plus = 0.0;
    double v = 0.0;
};

enum class ShockReason {
    VelocityRange,
    ZeroLeftState,
    EqualS,
    CIncreasing,
    OleinikFail,
    LaxFail,
    U2ToU1,
    Ok,
};

const char* to_string(ShockReason r);

enum class OrbitStatus { Connected, NoConnection, Inconclusive };

const char* to_string(OrbitStatus s);

struct OrbitResult {
    OrbitStatus status = OrbitStatus::Inconclusive;
    double final_distance = 0.0;  // distance to the target state when stopping
    long steps_used = 0;
    bool used_backward_shot = false;
};

struct ShockVerdict {
    bool admissible = false;
    ShockReason reason = ShockReason::Ok;
    std::optional<OrbitResult> orbit;  // filled only when the orbit oracle ran
};

/// Rankine-Hugoniot residuals (exact algebra, no tolerance):
///   r1 = v [s] - [f],   r2 = v [cs + a(c)] - [c f],   [q] = q+ - q-.
std::pair<double, double> rh_residual(const ModelPair& model, const ShockData& shock);

/// Oleinik E-condition + Lax inequalities for an s-shock (c+ = c- = c).
ShockVerdict s_shock_admissible(const ModelPair& model, double s_minus, double s_plus, double c,
                                double v);

/// Candidate intermediate states for a c-shock at velocity v: roots of
/// f(s, c±) = v (s + d1) on each side, ascending. Empty when c- <= c+ or v <= 0.
struct CShockRoots {
    int n_minus = 0;
    int n_plus = 0;
    std::array<double, 2> s_minus{};
    std::array<double, 2> s_plus{};
};
CShockRoots c_shock_roots(const ModelPair& model, double v, double c_minus, double c_plus);

/// Nullcline classification of a c-shock (c+ != c-): inadmissible when c
/// increases or when the states realize the (u2-, u1+) pattern.
ShockVerdict c_shock_admissible(const ModelPair& model, const ShockData& shock);

/// Traveling-wave oracle: integrates the dynamic system
///   s_xi = f(s,c) - v (s + d1),   c_xi = v (d1 c - d2 - a(c))
/// from a point perturbed off (s-, c-) along the unstable eigendirection.
/// When the target is a saddle (the u1- -> u1+ pattern) the forward shot is
/// knife-edged, so a backward shot from (s+, c+) along its stable direction
/// is attempted before declaring failure.
OrbitResult traveling_wave_orbit(const ModelPair& model, const ShockData& shock,
                                 long max_steps = 2000000);

/// Dispatch: s-shock test when c+ == c-, c-shock test otherwise.
ShockVerdict classify_shock(const ModelPair& model, const ShockData& shock);

/// Shock states in Lagrange coordinates. U_minus may be +infinity (image of
/// s+ = 0), in which case v_star = 0.
struct LagrangeShock {
    double U_minus = 0.0;
    double U_plus = 0.0;
    double zeta_minus = 0.0;
    double zeta_plus = 0.0;
    double v_star = 0.0;
};

/// One-to-one shock mapping (sides swap because x plays the role of time):
///   U+ = theta_{c-}(s-),  U- = theta_{c+}(s+),  zeta+ = c-,  zeta- = c+.
LagrangeShock map_shock_to_lagrange(const ModelPair& model, const ShockData& shock);
ShockData map_shock_from_lagrange(const ModelPair& model, const LagrangeShock& ls);

/// Lax inequalities for a U-shock in Lagrange coordinates,
///   F_U(U+, zeta) <= v* <= F_U(U-, zeta),
/// equality on both sides only for U- = +infinity.
bool lagrange_lax_holds(const LagrangeFlux& flux, const LagrangeShock& ls, double tol = 1e-10);

}  // namespace slugflow

#endif
