#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eclbm/equilibrium.hpp"
#include "eclbm/linear_analysis.hpp"
#include "eclbm/scheme.hpp"

namespace eclbm {

enum class Topology { periodic, disc_in_box };

// Density of the wall equilibrium in anti-bounce-back.
// local: post-collision density of the fluid site. mass_balance: chosen so the
// site's wall links return exactly the mass they remove.
enum class WallDensity { mass_balance, local };

struct Grid {
    int nx = 32;
    int ny = 32;
    double dx = 1.0;
    Topology topology = Topology::periodic;
    // disc geometry in site units
    double cx = 0.0, cy = 0.0, radius = 0.0;
    double wall_e = 0.0;  // specific internal energy imposed at the disc wall
    WallDensity wall_density = WallDensity::mass_balance;

    void check() const;
    bool fluid(int x, int y) const;
    int sites() const { return nx * ny; }
};

struct FieldState {
    int nx = 0, ny = 0, q = 0;
    std::vector<double> f;  // site-major: f[(y*nx + x)*q + j]
    long step = 0;

    double* site(int x, int y) { return f.data() + (static_cast<size_t>(y) * nx + x) * q; }
    const double* site(int x, int y) const { return f.data() + (static_cast<size_t>(y) * nx + x) * q; }
};

struct Instability : std::runtime_error {
    long step;
    int x, y;
    Instability(const std::string& what, long step_, int x_, int y_)
        : std::runtime_error(what), step(step_), x(x_), y(y_) {}
};

struct WaveInit {
    int nx_periods = 1;
    int ny_periods = 0;
    ModeLabel mode = ModeLabel::shear;
    double amplitude = 1e-4;
    ReferenceState background;
};

enum class InitKind { plane_wave, eigenmode };

WaveVector wave_vector(const Grid& g, const WaveInit& w);

FieldState uniform_state(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                         const ReferenceState& W0);

// Background equilibrium plus amplitude * Re(exp(i k.x) d), with d the unit
// characteristic direction of the mode, lifted through the equilibrium Jacobian.
FieldState init_plane_wave(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                           const WaveInit& w);

// Same, but the perturbation is the discrete eigenvector of the amplification
// matrix for the mode, scaled so that measure_amplitude returns the amplitude.
FieldState init_eigenmode(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                          const WaveInit& w);

// Collide everywhere, then stream. Throws Instability on rho <= 0 or non-finite data.
void step(FieldState& st, const SchemeDescriptor& sc, const ParameterSet& p, const Grid& g);

// Sum over fluid sites of (rho, jx, jy, eps)
std::array<double, 4> totals(const FieldState& st, const SchemeDescriptor& sc, const Grid& g);

// Per-site conserved fields (rho, jx, jy, eps), each nx*ny long
std::array<std::vector<double>, 4> conserved_fields(const FieldState& st, const SchemeDescriptor& sc);

std::complex<double> measure_amplitude(const FieldState& st, const SchemeDescriptor& sc,
                                       const ParameterSet& p, const ReferenceState& W0,
                                       const Grid& g, const WaveVector& k, ModeLabel mode);

struct RelaxSample {
    long step = 0;
    double t = 0.0;
    std::complex<double> amp;
    std::array<double, 4> totals{};
};

std::vector<RelaxSample> run_relaxation(const Grid& g, const SchemeDescriptor& sc,
                                        const ParameterSet& p, const WaveInit& w, long n_steps,
                                        long sample_every, InitKind init = InitKind::plane_wave);

enum class SourceShape { gaussian, zero_mean };

struct DiscSource {
    SourceShape shape = SourceShape::gaussian;
    double amplitude = 1e-3;  // relative density perturbation
    double width = 3.0;       // site units
    double x = 0.0, y = 0.0;  // centre, site units
};

struct DiscSnapshot {
    long step = 0;
    std::array<std::vector<double>, 4> fields;  // rho, jx, jy, eps; solid sites hold the background
};

struct DiscResult {
    std::vector<DiscSnapshot> snapshots;
    std::vector<double> mass;  // fluid mass after each step, index 0 = initial
    std::vector<double> centre_signal;  // |rho - rho0| at the source site per step
};

// Disc of fluid inside a solid box; wall links use anti-bounce-back.
FieldState init_disc_pulse(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                           const ReferenceState& W0, const DiscSource& src);

DiscResult run_disc_acoustics(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                              const ReferenceState& W0, const DiscSource& src, long n_steps,
                              long snapshot_every);

// Radius of the peak of the azimuthally averaged |rho - rho0| around (x0, y0).
double front_radius(const std::vector<double>& rho, const Grid& g, double rho0, double x0, double y0);

}  // namespace eclbm
