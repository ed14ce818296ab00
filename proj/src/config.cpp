#include "eclbm/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eclbm {

namespace {

struct Entry {
    std::string section, key, value;
    int line = 0;
};

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"scheme",
         {"name", "lambda", "dx", "c0", "sigma5", "alpha2", "beta2", "isotropy", "heat_flux_velocity_square",
          "xi_x", "xi_y", "alpha3", "beta3", "alpha4", "beta4"}},
        {"reference", {"rho0", "u0", "v0", "E0"}},
        {"zero_point", {"k_min", "k_max", "n_k", "angles", "merge_threshold", "include_kinetic"}},
        {"relax_wave",
         {"nx", "ny", "periods_x", "periods_y", "mode", "amplitude", "advection", "steps", "sample_every", "init"}},
        {"disc",
         {"nx", "ny", "cx", "cy", "radius", "source", "amplitude", "width", "source_x", "source_y", "steps",
          "snapshot_every", "wall_density", "snapshot_format", "snapshot_prefix"}},
    };
    return k;
}

// Collects errors; values that fail to parse leave the target untouched.
class Reader {
public:
    std::vector<std::string> errors;

    void error(int line, const std::string& msg) {
        errors.push_back(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    }

    bool number(const Entry& e, double& out) {
        const std::string& v = e.value;
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
            error(e.line, e.key + ": not a finite number: '" + v + "'");
            return false;
        }
        out = x;
        return true;
    }
    bool number(const Entry& e, std::optional<double>& out) {
        double x;
        if (!number(e, x)) return false;
        out = x;
        return true;
    }
    template <class Int>
    bool integer(const Entry& e, Int& out, Int lo) {
        long long x = 0;
        const std::string& v = e.value;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
            error(e.line, e.key + ": not an integer: '" + v + "'");
            return false;
        }
        if (x < lo) {
            error(e.line, e.key + " must be >= " + std::to_string(lo));
            return false;
        }
        out = static_cast<Int>(x);
        return true;
    }
    bool boolean(const Entry& e, bool& out) {
        const std::string v = lower(e.value);
        if (v == "true" || v == "yes" || v == "on" || v == "1") {
            out = true;
        } else if (v == "false" || v == "no" || v == "off" || v == "0") {
            out = false;
        } else {
            error(e.line, e.key + ": expected true or false, got '" + e.value + "'");
            return false;
        }
        return true;
    }
    template <class T>
    bool choice(const Entry& e, T& out, const std::vector<std::pair<std::string, T>>& opts) {
        for (auto& [name, val] : opts)
            if (lower(e.value) == name) {
                out = val;
                return true;
            }
        std::vector<std::string> names;
        for (auto& o : opts) names.push_back(o.first);
        error(e.line, e.key + ": expected one of " + join(names, ", ") + ", got '" + e.value + "'");
        return false;
    }
};

void parse_scheme(const std::vector<Entry>& es, ExperimentConfig& cfg, Reader& rd) {
    FreeParameters& fp = cfg.params;
    // name first: rate keys depend on it
    bool named = false;
    for (const auto& e : es)
        if (e.section == "scheme" && e.key == "name") {
            try {
                fp.scheme = parse_scheme_name(e.value);
                named = true;
            } catch (const std::exception&) {
                rd.error(e.line, "name: unknown scheme '" + e.value + "' (D2Q9, D2Q13, D2Q17)");
            }
        }
    if (!named && std::none_of(es.begin(), es.end(), [](const Entry& e) { return e.section == "scheme" && e.key == "name"; }))
        rd.error(0, "[scheme] name is required");

    std::map<int, int> rate_line;
    int sigma_line = 0;
    for (const auto& e : es) {
        if (e.section != "scheme" || e.key == "name") continue;
        const std::string& k = e.key;
        if (k == "lambda") {
            if (rd.number(e, fp.lambda) && !(fp.lambda > 0.0)) rd.error(e.line, "lambda must be positive");
        } else if (k == "dx") {
            if (rd.number(e, fp.dx) && !(fp.dx > 0.0)) rd.error(e.line, "dx must be positive");
        } else if (k == "c0") {
            if (rd.number(e, fp.c0) && !(*fp.c0 > 0.0)) rd.error(e.line, "c0 must be positive");
        } else if (k == "alpha2") {
            rd.number(e, fp.alpha2);
        } else if (k == "beta2") {
            rd.number(e, fp.beta2);
        } else if (k == "xi_x") {
            rd.number(e, fp.xi_x);
        } else if (k == "xi_y") {
            rd.number(e, fp.xi_y);
        } else if (k == "alpha3") {
            rd.number(e, fp.alpha3);
        } else if (k == "beta3") {
            rd.number(e, fp.beta3);
        } else if (k == "alpha4") {
            rd.number(e, fp.alpha4);
        } else if (k == "beta4") {
            rd.number(e, fp.beta4);
        } else if (k == "heat_flux_velocity_square") {
            rd.boolean(e, fp.include_velocity_square_in_heat_flux);
        } else if (k == "isotropy") {
            rd.choice<IsotropyLevel>(e, fp.isotropy, {{"full", IsotropyLevel::full},
                                                      {"second_order", IsotropyLevel::second_order},
                                                      {"none", IsotropyLevel::none}});
        } else if (k == "sigma5") {
            double v;
            if (!rd.number(e, v)) continue;
            if (!(v > 0.0)) {
                rd.error(e.line, "sigma5 must be positive");
                continue;
            }
            if (sigma_line) rd.error(e.line, "shear rate already set on line " + std::to_string(sigma_line));
            fp.sigma5 = v;
            sigma_line = e.line;
        } else {
            const int idx = rate_key_index(fp.scheme, k);
            if (idx < 0) {
                rd.error(e.line, "unknown key '" + k + "' in [scheme]");
                continue;
            }
            double v;
            if (!rd.number(e, v)) continue;
            if (!(v > 0.0 && v < 2.0)) {
                rd.error(e.line, k + " = " + e.value + ": rate outside (0,2)");
                continue;
            }
            if (idx < 4) {
                rd.error(e.line, k + ": conserved moments have no relaxation rate");
                continue;
            }
            if (idx == 4 || idx == 5) {
                if (sigma_line) rd.error(e.line, "shear rate already set on line " + std::to_string(sigma_line));
                fp.sigma5 = sigma_from_rate(v);
                sigma_line = e.line;
                continue;
            }
            if (auto it = rate_line.find(idx); it != rate_line.end()) {
                rd.error(e.line, k + ": rate already set on line " + std::to_string(it->second));
                continue;
            }
            rate_line[idx] = e.line;
            fp.rates[idx] = v;
        }
    }
}

void parse_reference(const std::vector<Entry>& es, ExperimentConfig& cfg, Reader& rd) {
    ReferenceConfig& r = cfg.reference;
    for (const auto& e : es) {
        if (e.section != "reference") continue;
        if (e.key == "rho0") {
            if (rd.number(e, r.rho0) && !(r.rho0 > 0.0)) rd.error(e.line, "rho0 must be positive");
        } else if (e.key == "u0") {
            rd.number(e, r.u0);
        } else if (e.key == "v0") {
            rd.number(e, r.v0);
        } else if (e.key == "E0") {
            rd.number(e, r.E0);
        }
    }
}

void parse_angles(const Entry& e, std::vector<double>& out, Reader& rd) {
    std::vector<double> v;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Entry sub = e;
        sub.value = trim(item);
        double x;
        if (!rd.number(sub, x)) return;
        v.push_back(x);
    }
    if (v.empty()) {
        rd.error(e.line, "angles: empty list");
        return;
    }
    out = v;
}

void parse_zero_point(const std::vector<Entry>& es, ExperimentConfig& cfg, Reader& rd) {
    ZeroPointConfig& z = cfg.zero_point;
    int line = 0;
    for (const auto& e : es) {
        if (e.section != "zero_point") continue;
        line = line ? line : e.line;
        if (e.key == "k_min") {
            rd.number(e, z.k_min);
        } else if (e.key == "k_max") {
            rd.number(e, z.k_max);
        } else if (e.key == "n_k") {
            rd.integer(e, z.n_k, 1);
        } else if (e.key == "angles") {
            parse_angles(e, z.angles_deg, rd);
        } else if (e.key == "merge_threshold") {
            if (rd.number(e, z.merge_threshold) && !(z.merge_threshold > 0.0))
                rd.error(e.line, "merge_threshold must be positive");
        } else if (e.key == "include_kinetic") {
            rd.boolean(e, z.include_kinetic);
        }
    }
    if (z.k_min < 0.0) rd.error(line, "k_min must be >= 0");
    if (z.k_max < z.k_min) rd.error(line, "k_max must be >= k_min");
}

void parse_relax(const std::vector<Entry>& es, ExperimentConfig& cfg, Reader& rd) {
    RelaxConfig& r = cfg.relax;
    int line = 0;
    for (const auto& e : es) {
        if (e.section != "relax_wave") continue;
        line = line ? line : e.line;
        if (e.key == "nx") {
            rd.integer(e, r.nx, 4);
        } else if (e.key == "ny") {
            rd.integer(e, r.ny, 4);
        } else if (e.key == "periods_x") {
            rd.integer(e, r.periods_x, -1000000);
        } else if (e.key == "periods_y") {
            rd.integer(e, r.periods_y, -1000000);
        } else if (e.key == "mode") {
            rd.choice<ModeLabel>(e, r.mode, {{"shear", ModeLabel::shear},
                                             {"thermal", ModeLabel::thermal},
                                             {"acoustic", ModeLabel::acoustic_plus},
                                             {"acoustic_plus", ModeLabel::acoustic_plus},
                                             {"acoustic_minus", ModeLabel::acoustic_minus}});
        } else if (e.key == "amplitude") {
            if (rd.number(e, r.amplitude) && !(r.amplitude >= 0.0 && r.amplitude < 1.0))
                rd.error(e.line, "amplitude must lie in [0, 1)");
        } else if (e.key == "advection") {
            rd.number(e, r.advection);
        } else if (e.key == "steps") {
            rd.integer(e, r.steps, 0L);
        } else if (e.key == "sample_every") {
            rd.integer(e, r.sample_every, 1L);
        } else if (e.key == "init") {
            rd.choice<InitKind>(e, r.init, {{"plane_wave", InitKind::plane_wave}, {"eigenmode", InitKind::eigenmode}});
        }
    }
    if (r.periods_x == 0 && r.periods_y == 0 && r.amplitude != 0.0)
        rd.error(line, "zero wave vector with a nonzero amplitude");
    if (r.advection && (cfg.reference.u0 != 0.0 || cfg.reference.v0 != 0.0))
        rd.error(line, "advection and a nonzero reference u0/v0 are exclusive");
}

void parse_disc(const std::vector<Entry>& es, ExperimentConfig& cfg, Reader& rd) {
    DiscConfig& d = cfg.disc;
    int line = 0;
    for (const auto& e : es) {
        if (e.section != "disc") continue;
        line = line ? line : e.line;
        if (e.key == "nx") {
            rd.integer(e, d.nx, 4);
        } else if (e.key == "ny") {
            rd.integer(e, d.ny, 4);
        } else if (e.key == "cx") {
            rd.number(e, d.cx);
        } else if (e.key == "cy") {
            rd.number(e, d.cy);
        } else if (e.key == "radius") {
            rd.number(e, d.radius);
        } else if (e.key == "source") {
            rd.choice<SourceShape>(e, d.source, {{"gaussian", SourceShape::gaussian}, {"zero_mean", SourceShape::zero_mean}});
        } else if (e.key == "amplitude") {
            if (rd.number(e, d.amplitude) && !(std::abs(d.amplitude) < 1.0))
                rd.error(e.line, "amplitude must satisfy |amplitude| < 1");
        } else if (e.key == "width") {
            if (rd.number(e, d.width) && !(d.width > 0.0)) rd.error(e.line, "width must be positive");
        } else if (e.key == "source_x") {
            rd.number(e, d.source_x);
        } else if (e.key == "source_y") {
            rd.number(e, d.source_y);
        } else if (e.key == "steps") {
            rd.integer(e, d.steps, 0L);
        } else if (e.key == "snapshot_every") {
            rd.integer(e, d.snapshot_every, 0L);
        } else if (e.key == "wall_density") {
            rd.choice<WallDensity>(e, d.wall_density, {{"mass_balance", WallDensity::mass_balance}, {"local", WallDensity::local}});
        } else if (e.key == "snapshot_format") {
            std::string fmt;
            if (rd.choice<std::string>(e, fmt, {{"csv", "csv"}, {"binary", "binary"}})) d.snapshot_format = fmt;
        } else if (e.key == "snapshot_prefix") {
            if (e.value.empty())
                rd.error(e.line, "snapshot_prefix is empty");
            else
                d.snapshot_prefix = e.value;
        }
    }
    try {
        cfg.disc_grid().check();
    } catch (const std::exception& ex) {
        rd.error(line, std::string("disc: ") + ex.what());
        return;
    }
    const Grid g = cfg.disc_grid();
    const DiscSource s = cfg.disc_source();
    if (!g.fluid(static_cast<int>(std::lround(s.x)), static_cast<int>(std::lround(s.y))))
        rd.error(line, "disc: source centre is outside the disc");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error(join(errs, "\n")), errors(std::move(errs)) {}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int rate_key_index(SchemeName scheme, const std::string& key) {
    if (key.size() > 2 && key[0] == 's' && key[1] == '_') {
        const std::string lab = key.substr(2);
        static const std::map<std::string, std::string> alias = {{"q", "qx"}, {"r", "rx"}, {"tau", "taux"}};
        const auto it = alias.find(lab);
        const std::string want = it == alias.end() ? lab : it->second;
        const auto labels = build_scheme(scheme).moment_labels;
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == want) return static_cast<int>(i);
        return -1;
    }
    if (key.size() < 2 || key[0] != 's') return -1;
    int n = 0;
    auto [ptr, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), n);
    if (ec != std::errc() || ptr != key.data() + key.size()) return -1;
    switch (scheme) {
        case SchemeName::D2Q9: return n >= 1 && n <= 9 ? n - 1 : -1;
        case SchemeName::D2Q13: return n >= 1 && n <= 13 ? n - 1 : -1;
        case SchemeName::D2Q17:
            // customary sN numbering skips one slot: s12 is the XXe pair,
            // s14/s15 the E2/E3 rates and s17 the E4 rate
            if (n >= 1 && n <= 11) return n - 1;
            if (n >= 12 && n <= 15) return n;
            if (n == 17) return 16;
            return -1;
    }
    return -1;
}

ExperimentConfig parse_config(const std::string& text) {
    Reader rd;
    std::vector<Entry> entries;
    std::map<std::string, int> seen_section;
    std::map<std::pair<std::string, std::string>, int> seen_key;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        std::string s = raw;
        if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
        s = trim(s);
        if (s.empty() || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                rd.error(ln, "malformed section header '" + s + "'");
                section.clear();
                continue;
            }
            section = trim(s.substr(1, s.size() - 2));
            if (!known_keys().count(section)) {
                rd.error(ln, "unknown section [" + section + "]");
            } else if (auto it = seen_section.find(section); it != seen_section.end()) {
                rd.error(ln, "section [" + section + "] repeated (first on line " + std::to_string(it->second) + ")");
            } else {
                seen_section[section] = ln;
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            rd.error(ln, "expected 'key = value', got '" + s + "'");
            continue;
        }
        Entry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), ln};
        if (e.key.empty()) {
            rd.error(ln, "missing key before '='");
            continue;
        }
        if (section.empty()) {
            rd.error(ln, "key '" + e.key + "' outside any section");
            continue;
        }
        if (!known_keys().count(section)) continue;  // already reported
        const bool rate_like = section == "scheme" && e.key.size() > 1 && e.key[0] == 's' &&
                               (e.key[1] == '_' || std::isdigit(static_cast<unsigned char>(e.key[1])));
        if (!known_keys().at(section).count(e.key) && !rate_like) {
            rd.error(ln, "unknown key '" + e.key + "' in [" + section + "]");
            continue;
        }
        if (e.value.empty()) {
            rd.error(ln, "empty value for '" + e.key + "'");
            continue;
        }
        if (auto it = seen_key.find({section, e.key}); it != seen_key.end()) {
            rd.error(ln, "duplicate key '" + e.key + "' (first on line " + std::to_string(it->second) + ")");
            continue;
        }
        seen_key[{section, e.key}] = ln;
        entries.push_back(e);
    }

    ExperimentConfig cfg;
    parse_scheme(entries, cfg, rd);
    parse_reference(entries, cfg, rd);
    parse_zero_point(entries, cfg, rd);
    parse_relax(entries, cfg, rd);
    parse_disc(entries, cfg, rd);
    if (!rd.errors.empty()) throw ConfigError(rd.errors);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError({"cannot open config file '" + path + "'"});
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

ReferenceState ExperimentConfig::reference_state(const ParameterSet& p, const SchemeDescriptor& sc) const {
    ReferenceState w = ReferenceState::from_sound_speed(reference.rho0, reference.u0, reference.v0, p.c0 * sc.lambda);
    if (reference.E0) w.E0 = *reference.E0;
    return w;
}

Grid ExperimentConfig::disc_grid() const {
    Grid g;
    g.nx = disc.nx;
    g.ny = disc.ny;
    g.dx = params.dx;
    g.topology = Topology::disc_in_box;
    g.cx = disc.cx.value_or(0.5 * (disc.nx - 1));
    g.cy = disc.cy.value_or(0.5 * (disc.ny - 1));
    g.radius = disc.radius;
    g.wall_density = disc.wall_density;
    return g;
}

DiscSource ExperimentConfig::disc_source() const {
    const Grid g = disc_grid();
    DiscSource s;
    s.shape = disc.source;
    s.amplitude = disc.amplitude;
    s.width = disc.width;
    s.x = disc.source_x.value_or(g.cx);
    s.y = disc.source_y.value_or(g.cy);
    return s;
}

std::vector<std::string> echo_config(const ExperimentConfig& c) {
    std::vector<std::string> out;
    auto kv = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
    auto num = [&](const std::string& k, double v) { kv(k, fmt_num(v)); };
    auto opt = [&](const std::string& k, const std::optional<double>& v, const char* dflt) {
        // unset values are echoed as comments so the block parses back
        if (v) kv(k, fmt_num(*v));
        else out.push_back("; " + k + " = " + dflt);
    };
    const FreeParameters& fp = c.params;
    out.push_back("[scheme]");
    kv("name", to_string(fp.scheme));
    num("lambda", fp.lambda);
    num("dx", fp.dx);
    opt("c0", fp.c0, "default");
    num("sigma5", fp.sigma5);
    num("alpha2", fp.alpha2);
    num("beta2", fp.beta2);
    kv("isotropy", to_string(fp.isotropy));
    kv("heat_flux_velocity_square", fp.include_velocity_square_in_heat_flux ? "true" : "false");
    opt("xi_x", fp.xi_x, "default");
    opt("xi_y", fp.xi_y, "default");
    opt("alpha3", fp.alpha3, "default");
    opt("beta3", fp.beta3, "default");
    opt("alpha4", fp.alpha4, "default");
    opt("beta4", fp.beta4, "default");
    const auto labels = build_scheme(fp.scheme).moment_labels;
    for (auto [k, v] : fp.rates) num("s_" + labels[static_cast<size_t>(k)], v);
    out.push_back("[reference]");
    num("rho0", c.reference.rho0);
    num("u0", c.reference.u0);
    num("v0", c.reference.v0);
    opt("E0", c.reference.E0, "default");
    out.push_back("[zero_point]");
    num("k_min", c.zero_point.k_min);
    num("k_max", c.zero_point.k_max);
    kv("n_k", std::to_string(c.zero_point.n_k));
    std::vector<std::string> a;
    for (double d : c.zero_point.angles_deg) a.push_back(fmt_num(d));
    kv("angles", join(a, ", "));
    num("merge_threshold", c.zero_point.merge_threshold);
    kv("include_kinetic", c.zero_point.include_kinetic ? "true" : "false");
    out.push_back("[relax_wave]");
    const RelaxConfig& r = c.relax;
    kv("nx", std::to_string(r.nx));
    kv("ny", std::to_string(r.ny));
    kv("periods_x", std::to_string(r.periods_x));
    kv("periods_y", std::to_string(r.periods_y));
    kv("mode", r.mode == ModeLabel::acoustic_plus ? "acoustic" : to_string(r.mode));
    num("amplitude", r.amplitude);
    opt("advection", r.advection, "none");
    kv("steps", std::to_string(r.steps));
    kv("sample_every", std::to_string(r.sample_every));
    kv("init", r.init == InitKind::eigenmode ? "eigenmode" : "plane_wave");
    out.push_back("[disc]");
    const DiscConfig& d = c.disc;
    const Grid g = c.disc_grid();
    const DiscSource s = c.disc_source();
    kv("nx", std::to_string(d.nx));
    kv("ny", std::to_string(d.ny));
    num("cx", g.cx);
    num("cy", g.cy);
    num("radius", d.radius);
    kv("source", d.source == SourceShape::gaussian ? "gaussian" : "zero_mean");
    num("amplitude", d.amplitude);
    num("width", d.width);
    num("source_x", s.x);
    num("source_y", s.y);
    kv("steps", std::to_string(d.steps));
    kv("snapshot_every", std::to_string(d.snapshot_every));
    kv("wall_density", d.wall_density == WallDensity::mass_balance ? "mass_balance" : "local");
    kv("snapshot_format", d.snapshot_format);
    if (d.snapshot_prefix) kv("snapshot_prefix", *d.snapshot_prefix);
    else out.push_back("; snapshot_prefix = default");
    return out;
}

}  // namespace eclbm
