#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "eclbm/equilibrium.hpp"
#include "eclbm/scheme.hpp"

namespace eclbm {

using cplx = std::complex<double>;

struct WaveVector {
    double k = 0.0;      // 1/length
    double theta = 0.0;  // radians from the x axis
    double kx() const;
    double ky() const;
};

CMat amplification_matrix(const SchemeDescriptor& sc, const ParameterSet& p,
                          const ReferenceState& W0, const WaveVector& k);

enum class ModeLabel { shear = 0, thermal = 1, acoustic_plus = 2, acoustic_minus = 3, kinetic = 4 };
std::string to_string(ModeLabel l);
ModeLabel parse_mode_label(const std::string& s);

constexpr std::array<ModeLabel, 4> kPhysicalModes = {ModeLabel::shear, ModeLabel::thermal,
                                                     ModeLabel::acoustic_plus,
                                                     ModeLabel::acoustic_minus};

struct ModeSpectrum {
    CVec values;
    CMat vectors;  // population-space eigenvectors (unit columns); may be empty
    std::vector<ModeLabel> labels;  // all kinetic until labelled
};

ModeSpectrum spectrum(const CMat& A, bool with_vectors = true);

// R0 with d/dx -> -i kx, d/dy -> -i ky, sqrt(Laplacian) -> i|k|, in the
// variables (rho, jx, jy, eps). Column order follows ModeLabel. acoustic_plus is
// the "+c0 grad" column: at rest its wave travels along -k, so arg(lambda) ~ +c0 k dt.
// At k = 0 the columns degenerate and the unit directions below are returned.
CMat characteristic_basis(const ReferenceState& W0, double c0, const WaveVector& k);

// Real unit-column directions of R0 with the i|k| factors divided out,
// ordered like kPhysicalModes. Well defined at k = 0 (theta fixes the direction).
Mat characteristic_directions(const ReferenceState& W0, double c0, double theta);

// Conserved part (rho, jx, jy, eps) of a population-space vector.
CVec conserved_part(const SchemeDescriptor& sc, const CVec& f);

struct TrackOptions {
    double merge_threshold = 1e-10;
    double tie_window = 3.0;  // candidates within tie_window * nearest distance go to overlap
};

struct TrackedPoint {
    double k = 0.0;
    CVec values;
    std::array<int, 4> index{};  // eigenvalue index of each physical mode
    std::array<cplx, 4> lambda{};
    bool ambiguous = false;
    double max_modulus = 0.0;
};

struct MergeEvent {
    double theta = 0.0;
    double k = 0.0;
    cplx shear, thermal;
};

struct TrackResult {
    double theta = 0.0;
    std::vector<TrackedPoint> points;
    std::optional<MergeEvent> merge;
    double max_modulus = 0.0;
    double max_modulus_k = 0.0;
    std::vector<double> ambiguous_k;
};

TrackResult track_modes(const SchemeDescriptor& sc, const ParameterSet& p, const ReferenceState& W0,
                        double theta, const std::vector<double>& k_grid,
                        const TrackOptions& opt = {});

// Label the four physical eigenvalues of a single spectrum by projection on
// the characteristic directions.
std::array<int, 4> label_by_projection(const SchemeDescriptor& sc, const ParameterSet& p,
                                       const ReferenceState& W0, double theta,
                                       const ModeSpectrum& spec);

struct EffectivePoint {
    double k = 0.0;
    // shear/thermal: -ln|l|/(k^2 dt); acoustic: attenuation of the same form
    std::array<double, 4> damping{};
    // |arg| / (k dt) in the advection-removed frame, divided by c0 (acoustic only)
    std::array<double, 4> vsound_ratio{};
};

std::vector<EffectivePoint> effective_coefficients(const SchemeDescriptor& sc, const ParameterSet& p,
                                                   const ReferenceState& W0,
                                                   const TrackResult& tr);

// Richardson-style k -> 0 limit from the three smallest k (fit a + b k^2 + c k^4).
std::array<double, 4> small_k_damping(const SchemeDescriptor& sc, const ParameterSet& p,
                                      const ReferenceState& W0, double theta,
                                      double k_small = 2e-3);

struct DispersionFit {
    // coefficients a_n of ln(lambda)/dt = sum_{n=1..order} a_n k^n, per physical mode
    std::array<std::vector<cplx>, 4> coeff;
    std::array<std::vector<double>, 4> stderr_;
    std::array<double, 4> residual{};
    double condition = 0.0;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

DispersionFit fit_dispersion(const SchemeDescriptor& sc, const ParameterSet& p,
                             const ReferenceState& W0, const TrackResult& tr, int order = 6,
                             double k_lo = 0.01, double k_hi = 0.2);

// max over angle pairs of |a_n(theta) - a_n(theta')|, per mode and order
std::array<std::vector<double>, 4> anisotropy_defect(const std::vector<DispersionFit>& fits);

struct StabilityScan {
    double max_modulus = 0.0;
    double k = 0.0;
    double theta = 0.0;
};
StabilityScan stability_scan(const SchemeDescriptor& sc, const ParameterSet& p,
                             const ReferenceState& W0, const std::vector<double>& thetas,
                             const std::vector<double>& ks);

}  // namespace eclbm
