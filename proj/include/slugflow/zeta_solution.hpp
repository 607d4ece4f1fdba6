#ifndef SLUGFLOW_ZETA_SOLUTION_HPP
#define SLUGFLOW_ZETA_SOLUTION_HPP

#include "slugflow/model.hpp"

namespace slugflow {

/// Full solution of the decoupled concentration equation
///   zeta_x + a(zeta)_phi = 0
/// for the slug boundary data (zeta = 1 on the inlet up to phi = t_inj):
/// straight front segment OA of slope v(1,0), rarefaction fan from
/// T = (t_inj, 0), and the curved front Phi given in closed form by
///   Phi(x) = t_inj + a_z(q(t_inj/x)) x.
/// Immutable after construction; evaluation is pure.
class ZetaField {
public:
    ZetaField(const AdsorptionModel& ads, double t_inj);

    const AdsorptionModel& ads() const { return ads_; }
    double t_inj() const { return t_inj_; }
    double v10() const { return v10_; }
    double x_A() const { return x_A_; }
    double phi_A() const { return phi_A_; }

    /// Curved front for x >= x_A (closed form).
    double front_phi(double x) const;
    /// Concentration carried on the upper side of the curved front: q(t_inj/x).
    double zeta_front(double x) const;
    /// Front slope a(zeta)/zeta at zeta = zeta_front(x); equals Phi'(x).
    double front_slope(double x) const;
    /// Whole chemical front: v(1,0) x up to x_A, then Phi(x).
    double front_at(double x) const;

    double fan_bottom(double x) const { return t_inj_ + ads_.a_z(1.0) * x; }
    double fan_top(double x) const { return t_inj_ + ads_.a_z(0.0) * x; }

    /// Point evaluation with the upper-phi convention on discontinuities.
    double eval(double phi, double x) const;

    /// log-radius of the front at concentration level z (polar coordinates
    /// centered at T):  psi_Phi(z) = ln t_inj - ln p(z) + (1/2) ln(1 + a_z^2).
    double psi_front(double z) const;
    /// Inverse of the strip map: (z, psi) -> (phi, x) inside the cone.
    void cone_point(double z, double psi, double& phi, double& x) const;

private:
    AdsorptionModel ads_;
    double t_inj_;
    double v10_;
    double x_A_;
    double phi_A_;
};

ZetaField build_zeta(const ModelPair& model, double t_inj);

}  // namespace slugflow

#endif
