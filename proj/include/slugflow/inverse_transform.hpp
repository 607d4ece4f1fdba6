#ifndef SLUGFLOW_INVERSE_TRANSFORM_HPP
#define SLUGFLOW_INVERSE_TRANSFORM_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "slugflow/u_solution.hpp"

namespace slugflow {

/// Sampled physical fields on a uniform grid: x holds cell centers, t holds
/// right endpoints (a single-row field is a snapshot at its final time).
/// Values are stored row-major, index [j * nx + i] for (x_i, t_j).
struct GridField {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> s;
    std::vector<double> c;
    // model metadata carried along for provenance
    double M0 = 0, m = 0, Gamma = 0, beta = 0, t_inj = 0;

    std::size_t nx() const { return x.size(); }
    std::size_t nt() const { return t.size(); }
    double s_at(std::size_t i, std::size_t j) const { return s[j * nx() + i]; }
    double c_at(std::size_t i, std::size_t j) const { return c[j * nx() + i]; }

    /// CSV with a header row and fixed column order x,t,s,c (t-major rows).
    void write_csv(std::ostream& os) const;
};

/// Inverse time map
///   t(phi, x) = phi + int_0^x s/f (U(phi,x'), zeta(phi,x')) dx'
/// by adaptive quadrature split at the known region-boundary crossings.
double time_of(const ConeSolution& sol, double phi, double x, double tol = 1e-9);

/// Boundary of the zero-saturation region: t0(x) = t(0+, x).
double t0_curve(const ConeSolution& sol, double x);

/// Monotone inversion of t = time_of(phi, x) in phi (bracket [0, t]).
/// Requires t >= t0(x); bracket_lo may carry a warm start from a smaller t.
double phi_from_time(const ConeSolution& sol, double x, double t, double bracket_lo = 0.0,
                     double tol = 1e-10);

GridField sample_grid(const ConeSolution& sol, int nx, int nt, double x_max, double t_max);

/// Cell-averaged L1 distance between fields on identical grids.
double compare_fields(const GridField& a, const GridField& b, char which);

}  // namespace slugflow

#endif
