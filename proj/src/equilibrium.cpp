#include "eclbm/equilibrium.hpp"

#include <cmath>
#include <string>

namespace eclbm {

namespace {

struct HeatFlux {
    double A, B, C;
};

HeatFlux heat_flux(SchemeName n) {
    switch (n) {
        case SchemeName::D2Q9: return {3.0, 3.0, 2.0};
        case SchemeName::D2Q13: return {17.0 / 13.0, 1.0, 2.0 / 13.0};
        case SchemeName::D2Q17: return {71.0 / 17.0, 3.0, 6.0 / 17.0};
    }
    return {0, 0, 0};
}

constexpr double kXXeWeight13 = 1.0 / 28.0;
constexpr double kXXeWeight17 = 1.0 / 60.0;

}  // namespace

TauCoeffs tau_coefficients(const ParameterSet& p) {
    // tau = -31/2 l^5 [ ... ] with the diagonal momentum slope shifted
    const auto& r = p.r_coeffs;
    const double shift = (249.0 * p.c0 * p.c0 - 442.0) / 124.0;
    TauCoeffs t;
    t.c = r;
    t.c[1] += shift;
    t.c[6] += shift;
    for (double& v : t.c) v *= -15.5;
    return t;
}

Vec equilibrium_moments(const SchemeDescriptor& sc, const ParameterSet& p, double rho, double jx,
                        double jy, double E) {
    if (!(rho > 0.0))
        throw NonPositiveDensity("nonpositive density " + std::to_string(rho));
    const double L = sc.lambda, L2 = L * L, L4 = L2 * L2, L6 = L4 * L2, L8 = L4 * L4;
    const auto& ix = sc.idx;
    Vec m = Vec::Zero(sc.q);
    m(0) = rho;
    m(1) = jx;
    m(2) = jy;
    m(3) = E;
    m(ix.XX) = (jx * jx - jy * jy) / rho;
    m(ix.XY) = jx * jy / rho;
    const auto hf = heat_flux(sc.name);
    const double B = p.include_velocity_square_in_heat_flux ? hf.B : 0.0;
    const double g = hf.A * L2 - B * (jx * jx + jy * jy) / (rho * rho) + hf.C * E / rho;
    m(ix.qx) = g * jx;
    m(ix.qy) = g * jy;
    m(ix.E2) = p.alpha2 * L4 * rho + p.beta2 * L2 * E;
    if (sc.name == SchemeName::D2Q13) {
        m(ix.rx) = p.c2 * L4 * jx;
        m(ix.ry) = p.c2 * L4 * jy;
        m(ix.E3) = p.alpha3 * L6 * rho + p.beta3 * L4 * E;
        m(ix.XXe) = p.xi_x * (L4 * rho + kXXeWeight13 * L2 * E);
    } else if (sc.name == SchemeName::D2Q17) {
        const auto& r = p.r_coeffs;
        const double L3 = L2 * L, L5 = L4 * L;
        m(ix.rx) = L3 * (r[0] * L2 * rho + r[1] * L * jx + r[2] * L * jy + r[3] * E);
        m(ix.ry) = L3 * (r[4] * L2 * rho + r[5] * L * jx + r[6] * L * jy + r[7] * E);
        const auto t = tau_coefficients(p).c;
        m(ix.tx) = L5 * (t[0] * L2 * rho + t[1] * L * jx + t[2] * L * jy + t[3] * E);
        m(ix.ty) = L5 * (t[4] * L2 * rho + t[5] * L * jx + t[6] * L * jy + t[7] * E);
        m(ix.XXe) = p.xi_x * (L4 * rho + kXXeWeight17 * L2 * E);
        m(ix.XYe) = p.xi_y * (L4 * rho + kXXeWeight17 * L2 * E);
        m(ix.E3) = p.alpha3 * L6 * rho + p.beta3 * L4 * E;
        m(ix.E4) = p.alpha4 * L8 * rho + p.beta4 * L6 * E;
    }
    return m;
}

Vec equilibrium_nonlinear(const SchemeDescriptor& sc, const ParameterSet& p,
                          const ConservedState& W) {
    return equilibrium_moments(sc, p, W.rho, W.jx, W.jy,
                               energy_numeric_from_physical(sc, W.rho, W.eps));
}

Mat equilibrium_jacobian(const SchemeDescriptor& sc, const ParameterSet& p,
                         const ReferenceState& W0) {
    if (!(W0.rho0 > 0.0)) throw NonPositiveDensity("nonpositive reference density");
    const double L = sc.lambda, L2 = L * L, L4 = L2 * L2, L6 = L4 * L2, L8 = L4 * L4;
    const double rho = W0.rho0, jx = rho * W0.u0, jy = rho * W0.v0;
    const double E = energy_numeric_from_physical(sc, rho, W0.eps0());
    const double u = W0.u0, v = W0.v0;
    const auto& ix = sc.idx;

    Mat J = Mat::Zero(sc.q, 4);
    J.topRows(4).setIdentity();
    J.row(ix.XX) << -(u * u - v * v), 2.0 * u, -2.0 * v, 0.0;
    J.row(ix.XY) << -u * v, v, u, 0.0;

    const auto hf = heat_flux(sc.name);
    const double B = p.include_velocity_square_in_heat_flux ? hf.B : 0.0;
    const double j2 = jx * jx + jy * jy;
    const double g = hf.A * L2 - B * j2 / (rho * rho) + hf.C * E / rho;
    const double dg_drho = 2.0 * B * j2 / (rho * rho * rho) - hf.C * E / (rho * rho);
    const double dg_djx = -2.0 * B * jx / (rho * rho);
    const double dg_djy = -2.0 * B * jy / (rho * rho);
    const double dg_dE = hf.C / rho;
    J.row(ix.qx) << jx * dg_drho, g + jx * dg_djx, jx * dg_djy, jx * dg_dE;
    J.row(ix.qy) << jy * dg_drho, jy * dg_djx, g + jy * dg_djy, jy * dg_dE;

    J.row(ix.E2) << p.alpha2 * L4, 0.0, 0.0, p.beta2 * L2;
    if (sc.name == SchemeName::D2Q13) {
        J.row(ix.rx) << 0.0, p.c2 * L4, 0.0, 0.0;
        J.row(ix.ry) << 0.0, 0.0, p.c2 * L4, 0.0;
        J.row(ix.E3) << p.alpha3 * L6, 0.0, 0.0, p.beta3 * L4;
        J.row(ix.XXe) << p.xi_x * L4, 0.0, 0.0, p.xi_x * kXXeWeight13 * L2;
    } else if (sc.name == SchemeName::D2Q17) {
        const auto& r = p.r_coeffs;
        const double L3 = L2 * L, L5 = L4 * L;
        J.row(ix.rx) << L3 * r[0] * L2, L3 * r[1] * L, L3 * r[2] * L, L3 * r[3];
        J.row(ix.ry) << L3 * r[4] * L2, L3 * r[5] * L, L3 * r[6] * L, L3 * r[7];
        const auto t = tau_coefficients(p).c;
        J.row(ix.tx) << L5 * t[0] * L2, L5 * t[1] * L, L5 * t[2] * L, L5 * t[3];
        J.row(ix.ty) << L5 * t[4] * L2, L5 * t[5] * L, L5 * t[6] * L, L5 * t[7];
        J.row(ix.XXe) << p.xi_x * L4, 0.0, 0.0, p.xi_x * kXXeWeight17 * L2;
        J.row(ix.XYe) << p.xi_y * L4, 0.0, 0.0, p.xi_y * kXXeWeight17 * L2;
        J.row(ix.E3) << p.alpha3 * L6, 0.0, 0.0, p.beta3 * L4;
        J.row(ix.E4) << p.alpha4 * L8, 0.0, 0.0, p.beta4 * L6;
    }
    return J;
}

Vec relax_moments(const Vec& m, const Vec& m_eq, const std::vector<double>& s,
                  const std::array<int, 4>& conserved) {
    Vec out = m;
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        bool cons = false;
        for (int c : conserved) cons = cons || (c == k);
        if (cons) continue;
        out(k) = m(k) + s[k] * (m_eq(k) - m(k));
    }
    return out;
}

ConservedState conserved_of(const SchemeDescriptor& sc, const Vec& f) {
    const double rho = sc.M.row(0).dot(f);
    const double E = sc.M.row(3).dot(f);
    return {rho, sc.M.row(1).dot(f), sc.M.row(2).dot(f), energy_physical_from_numeric(sc, rho, E)};
}

Vec collide(const SchemeDescriptor& sc, const ParameterSet& p, const Vec& f) {
    const Vec m = sc.M * f;
    const Vec meq = equilibrium_moments(sc, p, m(0), m(1), m(2), m(3));
    // increment form keeps the conserved moments of f untouched up to M*Minv round-off
    Vec dm = Vec::Zero(sc.q);
    for (int k = 4; k < sc.q; ++k) dm(k) = p.s[k] * (meq(k) - m(k));
    return f + sc.Minv * dm;
}

Vec equilibrium_populations(const SchemeDescriptor& sc, const ParameterSet& p,
                            const ConservedState& W) {
    return sc.Minv * equilibrium_nonlinear(sc, p, W);
}

}  // namespace eclbm
