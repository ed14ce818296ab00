#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "eclbm/scheme.hpp"

namespace eclbm {

// Coefficients are dimensionless; the matching power of lambda is applied
// when the equilibrium is evaluated (c1 ~ l^2, c2 ~ l^4, c3 ~ l^6).
struct ParameterSet {
    double c0 = 0.0;  // sound speed in units of lambda
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double alpha2 = 0.0, beta2 = 0.0;
    double alpha3 = 0.0, beta3 = 0.0;
    double alpha4 = 0.0, beta4 = 0.0;
    double xi_x = 0.0, xi_y = 0.0;
    // D2Q17 r equilibrium: c_x^rho, c_x^x, c_x^y, c_x^eps, c_y^rho, c_y^x, c_y^y, c_y^eps
    std::array<double, 8> r_coeffs{};
    std::vector<double> s;  // one rate per moment, zero on conserved moments
    bool include_velocity_square_in_heat_flux = false;

    double sigma(int k) const { return 1.0 / s.at(k) - 0.5; }
};

inline double sigma_from_rate(double s) { return 1.0 / s - 0.5; }
inline double rate_from_sigma(double sigma) { return 1.0 / (sigma + 0.5); }

struct ConservedState {
    double rho = 1.0;
    double jx = 0.0;
    double jy = 0.0;
    double eps = 0.0;  // physical total energy density
};

// W0 = (rho0, rho0 u0, rho0 v0, rho0 E0); E0 is the specific total energy.
struct ReferenceState {
    double rho0 = 1.0;
    double u0 = 0.0;
    double v0 = 0.0;
    double E0 = 0.0;
    double beta0 = 1.0;  // dp/d(rho e), diagnostic

    double k0() const { return 0.5 * (u0 * u0 + v0 * v0); }
    double eps0() const { return rho0 * E0; }
    ConservedState conserved() const { return {rho0, rho0 * u0, rho0 * v0, rho0 * E0}; }

    // Perfect gas p = rho e, so c^2 = 2e.
    static ReferenceState from_sound_speed(double rho0, double u0, double v0, double c0) {
        ReferenceState w;
        w.rho0 = rho0;
        w.u0 = u0;
        w.v0 = v0;
        w.E0 = 0.5 * c0 * c0 + w.k0();
        return w;
    }
};

struct NonPositiveDensity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Equilibrium moments from (rho, jx, jy, E) with E the numeric energy.
Vec equilibrium_moments(const SchemeDescriptor& sc, const ParameterSet& p, double rho, double jx,
                        double jy, double E);

Vec equilibrium_nonlinear(const SchemeDescriptor& sc, const ParameterSet& p,
                          const ConservedState& W);

// d m_eq / d(rho, jx, jy, E) at W0 (q x 4).
Mat equilibrium_jacobian(const SchemeDescriptor& sc, const ParameterSet& p,
                         const ReferenceState& W0);

// tau slope implied by the r coefficients (D2Q17)
struct TauCoeffs {
    std::array<double, 8> c;  // same layout as r_coeffs
};
TauCoeffs tau_coefficients(const ParameterSet& p);

Vec relax_moments(const Vec& m, const Vec& m_eq, const std::vector<double>& s,
                  const std::array<int, 4>& conserved = {0, 1, 2, 3});

ConservedState conserved_of(const SchemeDescriptor& sc, const Vec& f);

Vec collide(const SchemeDescriptor& sc, const ParameterSet& p, const Vec& f);

Vec equilibrium_populations(const SchemeDescriptor& sc, const ParameterSet& p,
                            const ConservedState& W);

}  // namespace eclbm
