#ifndef SLUGFLOW_U_SOLUTION_HPP
#define SLUGFLOW_U_SOLUTION_HPP

#include <vector>

#include "slugflow/model.hpp"
#include "slugflow/ode.hpp"
#include "slugflow/zeta_solution.hpp"

namespace slugflow {

/// Value of U on the chemical front demanded by the tangency (Jouguet)
/// condition:  F_U(U_J(z), z) = a(z)/z,  continued to z = 0 by a_z(0).
/// Evaluation root-solves in s-space (exact); tabulate() is for export.
class UJCurve {
public:
    explicit UJCurve(const LagrangeFlux& flux) : flux_(flux) {}
    double slope_sigma(double z) const;  // a(z)/z, a_z(0) at z = 0
    double at(double z) const;
    std::vector<std::pair<double, double>> tabulate(int n) const;

private:
    LagrangeFlux flux_;
};

/// Characteristic slope F_U(U+_OA, 1) = v(1,0) determines the fan value on the
/// straight front segment; root taken on (1, U_max(1)) where F_U decreases.
double u_plus_OA(const LagrangeFlux& flux, const ZetaField& zf);

/// Below-front companion state: root of the front jump condition
///   (F(U+,1) - F(U-,0)) / (U+ - U-) = v(1,0)   with U- > U+.
double u_minus_OA(const LagrangeFlux& flux, const ZetaField& zf, double U_plus);

/// Left-hand side of the tangency-applicability condition at (U_J(z), z):
///   -F_UU F_z + (F_Uz + b(z)/z) b(z);  negative means the condition holds.
double f5_lhs(const LagrangeFlux& flux, double z);

/// Strict sign changes of f5_lhs on (0,1], bisection-refined to width <= tol,
/// ascending. More than 16 changes aborts (unsupported regime).
std::vector<double> find_f5_sign_changes(const LagrangeFlux& flux, double tol = 1e-10);

enum class CurveFamily { TA, Jouguet };

/// One characteristic of the cone in strip coordinates: the solution
/// (U(zeta), psi(zeta)) of
///   dU/dzeta   = -F_z / (F_U - a_z)
///   dpsi/dzeta = a_zz a_z/(1+a_z^2) + a_zz/(F_U - a_z)
/// integrated downward from its origin (zeta = 1 on TA, zeta0 on the front),
/// terminated at zeta = 0 or at a front crossing.
struct CharCurve {
    CurveFamily family = CurveFamily::TA;
    double param = 0.0;       // U0 for TA curves, zeta0 for Jouguet curves
    double zeta_start = 1.0;
    double zeta_end = 0.0;    // 0, or the front-crossing location
    bool crossed_front = false;
    bool guard_stopped = false;  // denominator F_U - a_z collapsed (diagnostic)
    OdeTrajectory<2> traj;    // y = (U, psi)

    double U_at(double z) const { return traj.eval(z)[0]; }
    double psi_at(double z) const { return traj.eval(z)[1]; }
    bool alive_at(double z) const {
        return z <= zeta_start + 1e-14 && z >= zeta_end - 1e-14;
    }
};

struct ConeBuildOptions {
    int n_ta = 128;
    int n_jouguet = 128;         // per tangency stretch
    int refine_factor = 8;       // extra curves clustered at each C and B
    double ode_rtol = 1e-9;
    double zeta0_min = 1e-6;     // lowest Jouguet start (psi_front blows up at 0)
    double below_front_x_factor = 150.0;  // below-front table reach, in units of x_A
};

/// Result of a tangency shot: the family parameter whose curve touches the
/// front, the touch location, and the tangency residuals there.
struct Tangency {
    CurveFamily family = CurveFamily::TA;
    double param = 0.0;
    double zeta_touch = 0.0;
    double psi_residual = 0.0;  // psi - psi_front at the touch
    double U_residual = 0.0;    // U - U_J at the touch
};

/// Shooting on the maximal front excess within one family parameter range;
/// requires excess(lo) and excess(hi) of opposite sign.
Tangency shoot_tangency(const LagrangeFlux& flux, const ZetaField& zf, CurveFamily family,
                        double param_lo, double param_hi, const ConeBuildOptions& opts = {});

/// Tangency parameter on TA. The zeta_B argument is the (F5) sign change used
/// as a diagnostic reference; for Corey/Langmuir models the actual touch sits
/// at or below it (the crossing family overshoots the (F5) boundary), so the
/// touch location is discovered by the shot rather than assumed.
double locate_C(const LagrangeFlux& flux, const ZetaField& zf, double zeta_B,
                const ConeBuildOptions& opts = {});

CharCurve integrate_char(const LagrangeFlux& flux, const ZetaField& zf, CurveFamily family,
                         double param, const ConeBuildOptions& opts = {});

struct FrontStates {
    double U_plus = 0.0;
    double U_minus = 0.0;
    double v_star = 0.0;
    double zeta_plus = 0.0;
};

/// Assembled semi-analytical U-solution: characteristic families in the cone,
/// the constant/fan regions around them, and the below-front extension.
/// Immutable after build_cone; evaluation is pure.
class ConeSolution {
public:
    const std::vector<CharCurve>& curves() const { return curves_; }
    const std::vector<double>& f5_sign_changes() const { return sign_changes_; }
    const std::vector<double>& C_params() const { return c_params_; }
    const std::vector<Tangency>& tangencies() const { return tangencies_; }
    /// zeta0 ranges on which the front carries the tangency (Jouguet) data
    const std::vector<std::pair<double, double>>& jouguet_intervals() const {
        return jouguet_intervals_;
    }
    double U_plus_OA() const { return U_plus_OA_; }
    double U_minus_OA() const { return U_minus_OA_; }
    double sigma_OA() const { return sigma_OA_; }
    const ZetaField& zeta_field() const { return zf_; }
    const LagrangeFlux& flux() const { return flux_; }

    bool f5_holds_at(double z) const;
    double U_J(double z) const { return uj_.at(z); }
    /// Upper-boundary value on the front at concentration level z: U_J on
    /// tangency stretches, interpolated crossing records elsewhere.
    double U_front(double z) const;

    /// Interpolated evaluation inside the cone at strip coordinates (z, psi).
    double eval_cone(double z, double psi) const;

    /// Full region dispatch at a Lagrange point (phi >= 0, x >= 0).
    double eval_U(double phi, double x) const;

    /// States across the curved front at abscissa x > x_A (exact root solve).
    FrontStates below_front_values(double x) const;

    /// Characteristic slope below the curved front launched at x0 > x_A.
    double below_front_slope(double x0) const;

    /// Whether the below-front characteristic inclines are monotone in the
    /// launch abscissa (sampled); false signals potential collisions.
    bool below_front_fan_out_ok() const { return below_front_monotone_; }

    friend ConeSolution build_cone(const ModelPair& model, const ZetaField& zf,
                                   const ConeBuildOptions& opts);

    struct BelowFrontSample {
        double x0, U_minus, slope;
    };
    struct EdgeChar {
        double psi, x_e, U, sigma, intercept;  // straight characteristic data
    };

private:
    ConeSolution(const LagrangeFlux& flux, const ZetaField& zf)
        : flux_(flux), zf_(zf), uj_(flux) {}


    double pencil_value(double sigma) const;     // origin fan below OA
    double triangle_value(double sigma) const;   // fan in the triangle
    double above_cone_value(double phi, double x) const;
    double below_front_value(double phi, double x) const;
    double edge_U(double x_e) const;             // cone value on the upper edge
    FrontStates front_states_raw(double x) const;
    double below_front_slope_interp(double x0) const;

    LagrangeFlux flux_;
    ZetaField zf_;
    UJCurve uj_;
    double U_plus_OA_ = 0.0;
    double U_minus_OA_ = 0.0;
    double sigma_OA_ = 0.0;
    std::vector<double> sign_changes_;   // ascending
    std::vector<double> c_params_;
    std::vector<Tangency> tangencies_;
    std::vector<std::pair<double, double>> jouguet_intervals_;  // descending in zeta
    std::vector<CharCurve> curves_;      // global order: TA by U0 asc, Jouguet by zeta0 desc
    std::vector<std::pair<double, double>> crossing_table_;  // (zeta, U_Phi) ascending
    std::vector<BelowFrontSample> below_front_table_;        // ascending x0
    std::vector<EdgeChar> edge_chars_;                        // ascending psi/x_e
    bool below_front_monotone_ = true;
};

ConeSolution build_cone(const ModelPair& model, const ZetaField& zf,
                        const ConeBuildOptions& opts = {});

}  // namespace slugflow

#endif
