#include "slugflow/zeta_solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slugflow {

ZetaField::ZetaField(const AdsorptionModel& ads, double t_inj) : ads_(ads), t_inj_(t_inj) {
    if (!(t_inj > 0.0)) throw std::invalid_argument("ZetaField: t_inj must be positive");
    v10_ = ads_.chord(1.0, 0.0);
    x_A_ = t_inj_ / (v10_ - ads_.a_z(1.0));  // v(1,0) - a_z(1) = b(1) > 0
    phi_A_ = v10_ * x_A_;
}

double ZetaField::front_phi(double x) const {
    if (x < x_A_ * (1.0 - 1e-12))
        throw std::invalid_argument("ZetaField::front_phi: x below x_A");
    double z = zeta_front(x);
    return t_inj_ + ads_.a_z(z) * x;
}

double ZetaField::zeta_front(double x) const {
    double y = t_inj_ / x;
    // guard roundoff just above p(1) at x ~ x_A
    double p1 = ads_.p(1.0);
    if (y >= p1) return 1.0;
    return ads_.q(y);
}

double ZetaField::front_slope(double x) const {
    double z = zeta_front(x);
    return ads_.a(z) / z;
}

double ZetaField::front_at(double x) const {
    return (x <= x_A_) ? v10_ * x : front_phi(x);
}

double ZetaField::eval(double phi, double x) const {
    if (phi < 0.0 || x < 0.0)
        throw std::invalid_argument("ZetaField::eval: point outside the closed quadrant");
    if (x == 0.0) return (phi > 0.0 && phi <= t_inj_) ? 1.0 : 0.0;
    if (phi < front_at(x)) return 0.0;
    if (x <= x_A_ && phi < fan_bottom(x)) return 1.0;
    if (phi >= fan_top(x)) return 0.0;
    double r = (phi - t_inj_) / x;
    if (r <= ads_.a_z(1.0)) return 1.0;
    return std::clamp(ads_.g(r), 0.0, 1.0);
}

double ZetaField::psi_front(double z) const {
    double az = ads_.a_z(z);
    return std::log(t_inj_) - std::log(ads_.p(z)) + 0.5 * std::log(1.0 + az * az);
}

void ZetaField::cone_point(double z, double psi, double& phi, double& x) const {
    double az = ads_.a_z(z);
    double r = std::exp(psi) / std::sqrt(az * az + 1.0);
    x = r;
    phi = t_inj_ + az * r;
}

ZetaField build_zeta(const ModelPair& model, double t_inj) { return ZetaField(model.ads, t_inj); }

}  // namespace slugflow
