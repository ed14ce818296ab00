#include "eclbm/commands.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace eclbm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDeg = std::numbers::pi / 180.0;

void header(std::ostream& out, const std::string& cmd, const ExperimentConfig& cfg) {
    out << "# lbm " << cmd << "\n";
    for (const auto& l : echo_config(cfg)) out << "# " << l << "\n";
}

void derived_header(std::ostream& out, const ParameterSet& p, const SchemeDescriptor& sc, const ReferenceState& W0) {
    out << "# derived c0 = " << fmt_num(p.c0) << "\n";
    for (int k = 4; k < sc.q; ++k)
        out << "# derived s_" << sc.moment_labels[static_cast<size_t>(k)] << " = " << fmt_num(p.s[static_cast<size_t>(k)])
            << "\n";
    out << "# derived E0 = " << fmt_num(W0.E0) << "\n";
}

void row(std::ostream& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out << ',';
        if (c.find_first_of(",\"") == std::string::npos) {
            out << c;
        } else {
            out << '"';
            for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
            out << '"';
        }
        first = false;
    }
    out << '\n';
}

std::string N(double v) { return fmt_num(v); }

struct Setup {
    ParameterSet p;
    SchemeDescriptor sc;
    ReferenceState W0;
};

Setup setup(const ExperimentConfig& cfg) {
    Setup s;
    s.p = derive_parameters(cfg.params);
    s.sc = build_scheme(cfg.params.scheme, cfg.params.lambda, cfg.params.dx);
    s.W0 = cfg.reference_state(s.p, s.sc);
    return s;
}

std::string snapshot_name(const std::string& prefix, long step, const std::string& fmt) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%06ld", step);
    return prefix + buf + (fmt == "binary" ? ".bin" : ".csv");
}

void write_snapshot(const std::string& path, const std::string& fmt, const Grid& g, const DiscSnapshot& s) {
    if (fmt == "binary") {
        // int32 nx, int32 ny, int64 step, then per site (row-major in y) six float64:
        // x, y, rho, jx, jy, eps
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write snapshot '" + path + "'");
        const std::int32_t nx = g.nx, ny = g.ny;
        const std::int64_t step = s.step;
        f.write(reinterpret_cast<const char*>(&nx), sizeof nx);
        f.write(reinterpret_cast<const char*>(&ny), sizeof ny);
        f.write(reinterpret_cast<const char*>(&step), sizeof step);
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                const size_t i = static_cast<size_t>(y) * g.nx + x;
                const double rec[6] = {double(x), double(y), s.fields[0][i], s.fields[1][i], s.fields[2][i],
                                       s.fields[3][i]};
                f.write(reinterpret_cast<const char*>(rec), sizeof rec);
            }
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write snapshot '" + path + "'");
    f << "# step = " << s.step << "\n";
    f << "x,y,rho,jx,jy,eps\n";
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            const size_t i = static_cast<size_t>(y) * g.nx + x;
            row(f, {std::to_string(x), std::to_string(y), N(s.fields[0][i]), N(s.fields[1][i]), N(s.fields[2][i]),
                    N(s.fields[3][i])});
        }
}

std::string default_prefix(const CommandOptions& opt) {
    if (!opt.out_path) return "disc_snap";
    std::string p = *opt.out_path;
    const auto slash = p.find_last_of('/');
    const auto dot = p.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) p.erase(dot);
    return p + "_snap";
}

}  // namespace

int cmd_constraints(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const Setup s = setup(cfg);
    const ParameterSet& p = s.p;
    header(out, "constraints", cfg);
    row(out, {"kind", "name", "value", "pass"});
    auto par = [&](const std::string& n, double v) { row(out, {"parameter", n, N(v), ""}); };
    par("c0", p.c0);
    par("c1", p.c1);
    par("c2", p.c2);
    par("c3", p.c3);
    par("alpha2", p.alpha2);
    par("beta2", p.beta2);
    par("alpha3", p.alpha3);
    par("beta3", p.beta3);
    par("alpha4", p.alpha4);
    par("beta4", p.beta4);
    par("xi_x", p.xi_x);
    par("xi_y", p.xi_y);
    if (cfg.params.scheme == SchemeName::D2Q17) {
        static const char* rn[8] = {"r_x_rho", "r_x_x", "r_x_y", "r_x_eps", "r_y_rho", "r_y_x", "r_y_y", "r_y_eps"};
        for (int i = 0; i < 8; ++i) par(rn[i], p.r_coeffs[static_cast<size_t>(i)]);
    }
    for (int k = 0; k < s.sc.q; ++k) par("s_" + s.sc.moment_labels[static_cast<size_t>(k)], p.s[static_cast<size_t>(k)]);
    for (int k = 4; k < s.sc.q; ++k) par("sigma_" + s.sc.moment_labels[static_cast<size_t>(k)], p.sigma(k));
    const TransportCoefficients t = predicted_transport(p, s.sc);
    row(out, {"transport", "nu", N(t.nu), ""});
    row(out, {"transport", "kappa", N(t.kappa), ""});
    row(out, {"transport", "prandtl", N(t.prandtl), ""});
    if (t.gamma_acoustic) row(out, {"transport", "gamma", N(*t.gamma_acoustic), ""});
    const ValidationReport rep = validate(p, s.sc, cfg.params.isotropy);
    for (const auto& c : rep.checks) row(out, {"validation", c.name, N(c.residual), c.pass ? "true" : "false"});
    if (t.kappa_nonpositive) {
        err << "error: predicted thermal diffusivity is not positive\n";
        return kExitConstraint;
    }
    if (!rep.all_pass()) {
        for (const auto& c : rep.checks)
            if (!c.pass) err << "error: constraint " << c.name << " violated, residual " << N(c.residual) << "\n";
        return kExitConstraint;
    }
    return kExitOk;
}

int cmd_zero_point(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const Setup s = setup(cfg);
    const ZeroPointConfig& z = cfg.zero_point;
    header(out, "zero-point", cfg);
    derived_header(out, s.p, s.sc, s.W0);
    row(out, {"theta_deg", "k", "mode_label", "re", "im", "modulus", "arg", "nu_eff_or_kappa_eff", "vsound_ratio"});

    std::vector<double> ks;
    for (int i = 0; i < z.n_k; ++i)
        ks.push_back(z.n_k == 1 ? z.k_min : z.k_min + (z.k_max - z.k_min) * i / (z.n_k - 1));

    TrackOptions topt;
    topt.merge_threshold = z.merge_threshold;
    double worst = 0.0, worst_k = 0.0, worst_th = 0.0;
    auto emit = [&](double th_deg, double k, const std::string& lab, std::complex<double> l, double nu, double vr) {
        row(out, {N(th_deg), N(k), lab, N(l.real()), N(l.imag()), N(std::abs(l)), N(std::arg(l)), N(nu), N(vr)});
    };

    for (double th_deg : z.angles_deg) {
        const double th = th_deg * kDeg;
        // refine internally so continuation stays on its branch
        std::vector<double> grid;
        std::vector<int> pick(ks.size(), -1);
        const double h = 0.005;
        double last = 0.0;
        for (size_t i = 0; i < ks.size(); ++i) {
            if (ks[i] == 0.0) continue;
            const int sub = grid.empty() ? std::max(1, static_cast<int>(std::ceil(ks[i] / h)))
                                         : std::max(1, static_cast<int>(std::ceil((ks[i] - last) / h)));
            const double from = grid.empty() ? 0.0 : last;
            for (int j = 1; j <= sub; ++j) grid.push_back(j == sub ? ks[i] : from + (ks[i] - from) * j / sub);
            pick[i] = static_cast<int>(grid.size()) - 1;
            last = ks[i];
        }
        TrackResult tr;
        std::vector<EffectivePoint> eff;
        if (!grid.empty()) {
            tr = track_modes(s.sc, s.p, s.W0, th, grid, topt);
            eff = effective_coefficients(s.sc, s.p, s.W0, tr);
        }
        for (size_t i = 0; i < ks.size(); ++i) {
            const TrackedPoint* pt = nullptr;
            TrackedPoint zero;
            std::array<double, 4> nu{}, vr{};
            if (pick[i] >= 0) {
                pt = &tr.points[static_cast<size_t>(pick[i])];
                nu = eff[static_cast<size_t>(pick[i])].damping;
                vr = eff[static_cast<size_t>(pick[i])].vsound_ratio;
            } else {
                const ModeSpectrum sp = spectrum(amplification_matrix(s.sc, s.p, s.W0, {0.0, th}), true);
                zero.k = 0.0;
                zero.values = sp.values;
                zero.index = label_by_projection(s.sc, s.p, s.W0, th, sp);
                for (int m = 0; m < 4; ++m) zero.lambda[static_cast<size_t>(m)] = sp.values(zero.index[static_cast<size_t>(m)]);
                for (int j = 0; j < sp.values.size(); ++j) zero.max_modulus = std::max(zero.max_modulus, std::abs(sp.values(j)));
                pt = &zero;
                nu.fill(kNaN);
                vr.fill(kNaN);
                if (!eff.empty()) {
                    nu = eff.front().damping;
                    vr = eff.front().vsound_ratio;
                }
            }
            for (int m = 0; m < 4; ++m) {
                const double v = m >= 2 ? vr[static_cast<size_t>(m)] : kNaN;
                emit(th_deg, ks[i], to_string(kPhysicalModes[static_cast<size_t>(m)]), pt->lambda[static_cast<size_t>(m)],
                     nu[static_cast<size_t>(m)], v);
            }
            if (z.include_kinetic) {
                for (int j = 0; j < pt->values.size(); ++j) {
                    bool phys = false;
                    for (int m = 0; m < 4; ++m) phys = phys || pt->index[static_cast<size_t>(m)] == j;
                    if (!phys) emit(th_deg, ks[i], "kinetic", pt->values(j), kNaN, kNaN);
                }
            }
            if (pt->max_modulus > worst) {
                worst = pt->max_modulus;
                worst_k = ks[i];
                worst_th = th_deg;
            }
        }
        if (tr.merge) emit(th_deg, tr.merge->k, "merge", tr.merge->thermal, kNaN, kNaN);
    }
    if (worst > 1.0 + 1e-9) {
        err << "instability: max |lambda| = " << N(worst) << " at k = " << N(worst_k) << ", theta = " << N(worst_th)
            << " deg\n";
        return kExitInstability;
    }
    return kExitOk;
}

int cmd_relax_wave(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const Setup s = setup(cfg);
    const RelaxConfig& r = cfg.relax;
    Grid g;
    g.nx = r.nx;
    g.ny = r.ny;
    g.dx = cfg.params.dx;
    WaveInit w;
    w.nx_periods = r.periods_x;
    w.ny_periods = r.periods_y;
    w.mode = r.mode;
    w.amplitude = r.amplitude;
    w.background = s.W0;
    if (r.advection) {
        const WaveVector k = wave_vector(g, w);
        ReferenceConfig rc = cfg.reference;
        w.background = ReferenceState::from_sound_speed(rc.rho0, *r.advection * std::cos(k.theta),
                                                        *r.advection * std::sin(k.theta), s.p.c0 * s.sc.lambda);
        if (rc.E0) w.background.E0 = *rc.E0;
    }
    header(out, "relax-wave", cfg);
    derived_header(out, s.p, s.sc, w.background);
    out << "# derived u0 = " << N(w.background.u0) << "\n# derived v0 = " << N(w.background.v0) << "\n";
    row(out, {"step", "t", "amp_re", "amp_im", "amp_mod", "rho_total", "eps_total"});
    std::vector<RelaxSample> samples;
    try {
        samples = run_relaxation(g, s.sc, s.p, w, r.steps, r.sample_every, r.init);
    } catch (const Instability& e) {
        err << "instability: " << e.what() << "\n";
        return kExitInstability;
    }
    for (const auto& sm : samples)
        row(out, {std::to_string(sm.step), N(sm.t), N(sm.amp.real()), N(sm.amp.imag()), N(std::abs(sm.amp)),
                  N(sm.totals[0]), N(sm.totals[3])});
    return kExitOk;
}

int cmd_disc(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err, const CommandOptions& opt) {
    const Setup s = setup(cfg);
    const DiscConfig& d = cfg.disc;
    const Grid g = cfg.disc_grid();
    const DiscSource src = cfg.disc_source();
    const std::string fmt = opt.snapshot_format.value_or(d.snapshot_format);
    if (fmt != "csv" && fmt != "binary") {
        err << "config error: snapshot format must be csv or binary\n";
        return kExitConfig;
    }
    const std::string prefix = d.snapshot_prefix.value_or(default_prefix(opt));
    header(out, "disc", cfg);
    derived_header(out, s.p, s.sc, s.W0);
    DiscResult res;
    try {
        res = run_disc_acoustics(g, s.sc, s.p, s.W0, src, d.steps, d.snapshot_every);
    } catch (const Instability& e) {
        err << "instability: " << e.what() << "\n";
        return kExitInstability;
    }
    std::vector<double> radius(res.mass.size(), kNaN);
    for (const auto& sn : res.snapshots) {
        const std::string path = snapshot_name(prefix, sn.step, fmt);
        write_snapshot(path, fmt, g, sn);
        out << "# snapshot " << sn.step << " = " << path << "\n";
        radius[static_cast<size_t>(sn.step)] = front_radius(sn.fields[0], g, s.W0.rho0, src.x, src.y);
    }
    row(out, {"step", "t", "mass", "centre_signal", "front_radius"});
    for (size_t n = 0; n < res.mass.size(); ++n)
        row(out, {std::to_string(n), N(static_cast<double>(n) * s.sc.dt), N(res.mass[n]), N(res.centre_signal[n]),
                  N(radius[n])});
    return kExitOk;
}

int run_command_text(const std::string& command, const std::string& config_text, const CommandOptions& opt,
                     std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = parse_config(config_text);
    } catch (const ConfigError& e) {
        for (const auto& m : e.errors) err << "config error: " << (opt.config_path.empty() ? "" : opt.config_path + ": ") << m << "\n";
        return kExitConfig;
    }
    std::ostringstream buf;
    int code = kExitOk;
    try {
        if (command == "constraints") {
            code = cmd_constraints(cfg, buf, err);
        } else if (command == "zero-point") {
            code = cmd_zero_point(cfg, buf, err);
        } else if (command == "relax-wave") {
            code = cmd_relax_wave(cfg, buf, err);
        } else if (command == "disc") {
            code = cmd_disc(cfg, buf, err, opt);
        } else {
            err << "unknown command '" << command << "'\n";
            return kExitConfig;
        }
    } catch (const ConstraintViolation& e) {
        err << "constraint violation: " << e.what() << "\n";
        code = kExitConstraint;
    } catch (const Instability& e) {
        err << "instability: " << e.what() << "\n";
        code = kExitInstability;
    } catch (const NonPositiveDensity& e) {
        err << "instability: " << e.what() << "\n";
        code = kExitInstability;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        code = kExitConfig;
    }
    if (opt.out_path) {
        std::ofstream f(*opt.out_path);
        if (!f) {
            err << "cannot write '" << *opt.out_path << "'\n";
            return kExitConfig;
        }
        f << buf.str();
    } else {
        out << buf.str();
    }
    return code;
}

int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    std::ifstream f(opt.config_path);
    if (!f) {
        err << "config error: cannot open '" << opt.config_path << "'\n";
        return kExitConfig;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return run_command_text(command, ss.str(), opt, out, err);
}

}  // namespace eclbm
