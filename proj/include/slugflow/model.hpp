#ifndef SLUGFLOW_MODEL_HPP
#define SLUGFLOW_MODEL_HPP

#include <string>
#include <vector>

namespace slugflow {

/// Corey-family fractional flow
///
///   f(s,c) = s^2 / (s^2 + M(c) (1-s)^2),   M(c) = M0 (1 + m c)
///
/// S-shaped in s for every M(c) > 0, strictly decreasing in c when m > 0.
/// m = 0 is constructible (it makes f independent of c) so that assumption
/// validation can report the (F4) failure instead of hiding it.
struct FluidModel {
    double M0 = 1.0;
    double m = 1.0;

    FluidModel(double M0_, double m_);

    double mobility(double c) const { return M0 * (1.0 + m * c); }
    double mobility_c() const { return M0 * m; }

    double f(double s, double c) const;
    double f_s(double s, double c) const;
    double f_c(double s, double c) const;
    double f_ss(double s, double c) const;
    double f_sc(double s, double c) const;

    /// Unique inflection of f(.,c): root of M (1-s)^2 (1+2s) = s^2 (3-2s).
    double s_inflection(double c) const;
    /// Welge tangency point f(s)/s = f_s(s); closed form sqrt(M/(1+M)).
    double s_welge(double c) const;
};

/// Langmuir adsorption a(c) = Gamma beta c / (1 + beta c) with the derived
/// functions used throughout the construction:
///   g = (a_zeta)^{-1},  p(z) = a - z a_zeta,  q = p^{-1},
///   b(z) = a(z)/z - a_zeta(z) = p(z)/z.
struct AdsorptionModel {
    double Gamma = 2.0;
    double beta = 1.0;

    AdsorptionModel(double Gamma_, double beta_);

    double a(double z) const;
    double a_z(double z) const;
    double a_zz(double z) const;
    double g(double r) const;
    double p(double z) const;
    double q(double y) const;
    double q_bracketed(double y) const;  // root-solve fallback for q, cross-checked in tests
    double b(double z) const;
    double b_over_zeta(double z) const;  // finite at z = 0 (equals -a_zz(0)/2)
    /// chord slope (a(z1)-a(z2))/(z1-z2); tangent a_z when z1 == z2
    double chord(double z1, double z2) const;
};

struct ModelPair {
    FluidModel fluid;
    AdsorptionModel ads;
};

/// Reference parameter set used by defaults and most tests.
ModelPair default_model();

struct AssumptionCheck {
    std::string id;       // F1..F4, A1..A3
    std::string detail;
    bool pass = false;
    double worst_value = 0.0;  // signed margin; negative = violated
    double worst_s = 0.0;      // sample location (s unused for A-checks)
    double worst_c = 0.0;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_pass() const;
    std::string to_string() const;
};

/// Evaluate (F1)-(F4) and (A1)-(A3) on an n x n sample grid. n >= 16.
AssumptionReport validate_assumptions(const ModelPair& model, int n);

struct FluxDerivs {
    double F;
    double F_U;
    double F_z;
    double F_UU;
    double F_Uz;
};

/// Transformed flux of the Lagrange-coordinate system,
///   F(U, zeta) = -s / f(s, zeta)  with  s = vartheta_zeta(U),  U = 1/f.
/// All partials are closed-form chain rules through the implicit s.
class LagrangeFlux {
public:
    static constexpr double U_cap = 1e8;

    explicit LagrangeFlux(const ModelPair& mp) : model_(mp) {}
    const ModelPair& model() const { return model_; }

    /// theta_c(s) = 1/f(s,c)
    double theta(double s, double z) const;
    /// inverse of theta in s: solves f(s,z) = 1/U on (0,1], residual <= 1e-12.
    /// U above U_cap is clamped to the s solving f = 1e-8.
    double vartheta(double U, double z) const;

    double F(double U, double z) const;
    FluxDerivs derivs(double U, double z) const;  // requires U > 1
    double F_U(double U, double z) const { return derivs(U, z).F_U; }
    double F_z(double U, double z) const { return derivs(U, z).F_z; }
    double F_UU(double U, double z) const { return derivs(U, z).F_UU; }
    double F_Uz(double U, double z) const { return derivs(U, z).F_Uz; }

    /// F_U expressed through s:  F_U = f/f_s - s at (s, z).
    double F_U_of_s(double s, double z) const;

    double U_max(double z) const;     // argmax of F(.,z): U at the Welge point
    double U_inflect(double z) const; // F_UU sign change: U at f's inflection

    /// Solve F_U(U, z) = sigma on the monotone s-interval [s_lo, s_hi]
    /// (F_U_of_s is increasing in s above the Welge point). Returns U.
    double U_from_slope(double sigma, double z, double s_lo, double s_hi) const;

private:
    ModelPair model_;
};

}  // namespace slugflow

#endif
