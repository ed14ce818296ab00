#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eclbm/constraints.hpp"
#include "eclbm/linear_analysis.hpp"
#include "eclbm/simulator.hpp"

namespace eclbm {

struct ReferenceConfig {
    double rho0 = 1.0;
    double u0 = 0.0;
    double v0 = 0.0;
    std::optional<double> E0;  // specific total energy; default c0^2/2 + k0
};

struct ZeroPointConfig {
    double k_min = 0.01;
    double k_max = 3.14159265358979323846;
    int n_k = 100;
    std::vector<double> angles_deg{0.0};
    double merge_threshold = 1e-10;
    bool include_kinetic = false;
};

struct RelaxConfig {
    int nx = 32, ny = 32;
    int periods_x = 1, periods_y = 0;
    ModeLabel mode = ModeLabel::shear;
    double amplitude = 1e-4;
    std::optional<double> advection;  // speed along k; overrides reference u0, v0
    long steps = 1000;
    long sample_every = 10;
    InitKind init = InitKind::plane_wave;
};

struct DiscConfig {
    int nx = 101, ny = 101;
    std::optional<double> cx, cy;  // default: box centre
    double radius = 45.0;
    SourceShape source = SourceShape::gaussian;
    double amplitude = 1e-3;
    double width = 3.0;
    std::optional<double> source_x, source_y;  // default: disc centre
    long steps = 150;
    long snapshot_every = 50;
    WallDensity wall_density = WallDensity::mass_balance;
    std::string snapshot_format = "csv";
    std::optional<std::string> snapshot_prefix;
};

struct ExperimentConfig {
    FreeParameters params;
    ReferenceConfig reference;
    ZeroPointConfig zero_point;
    RelaxConfig relax;
    DiscConfig disc;

    ReferenceState reference_state(const ParameterSet& p, const SchemeDescriptor& sc) const;
    Grid disc_grid() const;
    DiscSource disc_source() const;
};

struct ConfigError : std::runtime_error {
    std::vector<std::string> errors;  // "line N: message"
    explicit ConfigError(std::vector<std::string> errs);
};

// Throws ConfigError listing every problem found.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Rate keys: sN (customary numbering, see README) or s_<moment label>. Returns the
// 0-based moment index, or -1 when the key names nothing in this scheme.
int rate_key_index(SchemeName scheme, const std::string& key);

// Every resolved setting, one "key = value" per line, grouped by section.
std::vector<std::string> echo_config(const ExperimentConfig& cfg);

// %.17g
std::string fmt_num(double v);

}  // namespace eclbm
