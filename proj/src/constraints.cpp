#include "eclbm/constraints.hpp"

#include <cmath>
#include <sstream>

namespace eclbm {

IsotropyLevel parse_isotropy_level(const std::string& s) {
    if (s == "none") return IsotropyLevel::none;
    if (s == "second_order") return IsotropyLevel::second_order;
    if (s == "full") return IsotropyLevel::full;
    throw std::invalid_argument("unknown isotropy level: " + s);
}

std::string to_string(IsotropyLevel l) {
    switch (l) {
        case IsotropyLevel::none: return "none";
        case IsotropyLevel::second_order: return "second_order";
        case IsotropyLevel::full: return "full";
    }
    return "?";
}

namespace {

int q_of(SchemeName s) {
    switch (s) {
        case SchemeName::D2Q9: return 9;
        case SchemeName::D2Q13: return 13;
        case SchemeName::D2Q17: return 17;
    }
    return 0;
}

int pair_of(SchemeName s, int k) {
    auto in = [&](int a, int b) { return k == a ? b : (k == b ? a : -1); };
    for (auto [a, b] : {std::pair{4, 5}, {6, 7}}) {
        if (int r = in(a, b); r >= 0) return r;
    }
    if (s == SchemeName::D2Q13) {
        if (int r = in(8, 9); r >= 0) return r;
    }
    if (s == SchemeName::D2Q17) {
        for (auto [a, b] : {std::pair{8, 9}, {10, 11}, {12, 13}}) {
            if (int r = in(a, b); r >= 0) return r;
        }
    }
    return -1;
}

double default_c0(SchemeName s) {
    switch (s) {
        case SchemeName::D2Q9: return std::sqrt(2.0 / 3.0);
        case SchemeName::D2Q13: return 2.0 / std::sqrt(5.0);
        case SchemeName::D2Q17: return std::sqrt(7.0 / 6.0);
    }
    return 1.0;
}

// Heat-flux slope at rest, q = c1 j.
double c1_of(SchemeName s, double c0) {
    const double c2 = c0 * c0;
    switch (s) {
        case SchemeName::D2Q9: return 6.0 * c2 - 5.0;
        case SchemeName::D2Q13: return 2.0 * c2 - 3.0;
        case SchemeName::D2Q17: return 6.0 * c2 - 17.0;
    }
    return 0.0;
}

double c2_of(SchemeName s, double c0) {
    const double c2 = c0 * c0;
    if (s == SchemeName::D2Q13) return (62.0 - 63.0 * c2) / 12.0;
    if (s == SchemeName::D2Q17) return (31.0 - 21.0 * c2) / 6.0;
    return 0.0;
}

double c3_of(double c0) { return (555.0 * c0 * c0 - 596.0) / 24.0; }

std::string rate_name(const SchemeDescriptor& sc, int k) {
    return "s[" + std::to_string(k) + "] (" + sc.moment_labels[k] + ")";
}

}  // namespace

std::vector<int> derived_rate_indices(SchemeName s, IsotropyLevel level) {
    if (level != IsotropyLevel::full) return {};
    switch (s) {
        case SchemeName::D2Q9: return {6, 7};
        case SchemeName::D2Q13: return {6, 7, 8, 9, 12};
        case SchemeName::D2Q17: return {6, 7, 8, 9, 12, 13, 15};
    }
    return {};
}

D2Q13Higher d2q13_alpha3_beta3(double sigma5, double a2, double b2) {
    const double s2 = sigma5 * sigma5;
    const double den = 384.0 * s2 + 7.0;
    const double na = 41922.0 - 2505.0 * a2 + 54800.0 * b2 +
                      (14098944.0 + 97440.0 * a2 + 1315200.0 * b2) * s2;
    const double nb = -2756851.0 + 34250.0 * a2 - 889970.0 * b2 -
                      (204329472.0 - 822000.0 * a2 + 41211840.0 * b2) * s2;
    // overall sign of alpha3 reversed: the printed sign leaves a k^4 angular
    // defect in the acoustic and thermal branches, the reversed one cancels it
    return {-na / (1716.0 * den), nb / (216216.0 * den), na, nb};
}

D2Q17Higher d2q17_alpha_beta(double a2, double b2) {
    D2Q17Higher h;
    h.alpha3 = -(5.0 * (2696442.0 + 7519.0 * a2)) / 436.0;
    h.beta3 = -(2949247.0 + 225570.0 * b2) / 2616.0;
    // E4 pair with reversed sign, see d2q13_alpha3_beta3
    h.alpha4 = (69687842.0 + 139145.0 * a2) / 177888.0;
    h.beta4 = (5.0 * (940101.0 + 55658.0 * b2)) / 355776.0;
    return h;
}

ParameterSet derive_parameters(const FreeParameters& fp) {
    const SchemeName sn = fp.scheme;
    const int q = q_of(sn);
    const bool full = fp.isotropy == IsotropyLevel::full;
    const bool second = fp.isotropy != IsotropyLevel::none;
    if (!(fp.sigma5 > 0.0)) throw ConstraintViolation("sigma5 must be positive");

    ParameterSet p;
    p.include_velocity_square_in_heat_flux = fp.include_velocity_square_in_heat_flux;
    p.alpha2 = fp.alpha2;
    p.beta2 = fp.beta2;

    p.c0 = fp.c0.value_or(default_c0(sn));
    if (sn == SchemeName::D2Q9 && second) p.c0 = default_c0(sn);
    if (sn == SchemeName::D2Q13 && full) p.c0 = default_c0(sn);
    if (!(p.c0 > 0.0)) throw ConstraintViolation("c0 must be positive");
    p.c1 = c1_of(sn, p.c0);
    p.c2 = c2_of(sn, p.c0);
    p.c3 = sn == SchemeName::D2Q17 ? c3_of(p.c0) : 0.0;
    if (sn == SchemeName::D2Q17) {
        p.r_coeffs = {};
        p.r_coeffs[1] = p.c2;
        p.r_coeffs[6] = p.c2;
    }

    if (full) {
        if (sn == SchemeName::D2Q13) {
            auto h = d2q13_alpha3_beta3(fp.sigma5, fp.alpha2, fp.beta2);
            p.alpha3 = h.alpha3;
            p.beta3 = h.beta3;
        } else if (sn == SchemeName::D2Q17) {
            auto h = d2q17_alpha_beta(fp.alpha2, fp.beta2);
            p.alpha3 = h.alpha3;
            p.beta3 = h.beta3;
            p.alpha4 = h.alpha4;
            p.beta4 = h.beta4;
        }
        if ((fp.xi_x && *fp.xi_x != 0.0) || (fp.xi_y && *fp.xi_y != 0.0))
            throw ConstraintViolation("xi_x, xi_y are forced to 0 by fourth-order isotropy");
    } else {
        p.alpha3 = fp.alpha3.value_or(0.0);
        p.beta3 = fp.beta3.value_or(0.0);
        p.alpha4 = fp.alpha4.value_or(0.0);
        p.beta4 = fp.beta4.value_or(0.0);
        p.xi_x = fp.xi_x.value_or(0.0);
        p.xi_y = fp.xi_y.value_or(0.0);
    }

    // rates
    std::vector<double> s(q, -1.0);
    auto set_rate = [&](int k, double v) {
        s[k] = v;
        if (int o = pair_of(sn, k); o >= 0) s[o] = v;
    };
    const double sigma5 = fp.sigma5;
    set_rate(4, rate_from_sigma(sigma5));
    std::map<int, double> derived;
    if (full) {
        const double sigma7 = 1.0 / (12.0 * sigma5);
        derived[6] = rate_from_sigma(sigma7);
        if (sn == SchemeName::D2Q13) {
            derived[8] = rate_from_sigma(sigma7);
            derived[12] = rate_from_sigma(sigma5);
        } else if (sn == SchemeName::D2Q17) {
            derived[8] = rate_from_sigma(sigma7);
            derived[12] = rate_from_sigma(sigma5);
            derived[15] = rate_from_sigma(sigma7);
        }
    }
    for (auto [k, v] : derived) set_rate(k, v);

    const SchemeDescriptor names = build_scheme(sn, fp.lambda, fp.dx);
    std::vector<bool> from_user(q, false);
    for (auto [k, v] : fp.rates) {
        if (k < 0 || k >= q) throw ConstraintViolation("rate index out of range: " + std::to_string(k));
        if (k < 4) throw ConstraintViolation("conserved moment rates are fixed at 0: " + rate_name(names, k));
        if (!(v > 0.0 && v < 2.0))
            throw ConstraintViolation(rate_name(names, k) + " = " + std::to_string(v) +
                                      ": rate outside (0,2)");
        if (from_user[k]) {
            if (v != s[k])
                throw ConstraintViolation("paired rates differ at " + rate_name(names, k));
            continue;
        }
        if (s[k] > 0.0) {
            // already constrained; a quoted value may repeat it rounded
            if (std::abs(v - s[k]) > 1e-3 * s[k]) {
                std::ostringstream os;
                os.precision(17);
                os << rate_name(names, k) << " = " << v << " conflicts with constrained value "
                   << s[k];
                throw ConstraintViolation(os.str());
            }
            continue;
        }
        set_rate(k, v);
        from_user[k] = true;
        if (int o = pair_of(sn, k); o >= 0) from_user[o] = true;
    }
    for (int k = 0; k < 4; ++k) s[k] = 0.0;
    for (int k = 4; k < q; ++k) {
        if (s[k] < 0.0) set_rate(k, 1.0);
        if (!(s[k] > 0.0 && s[k] < 2.0))
            throw ConstraintViolation(rate_name(names, k) + " outside (0,2)");
    }
    p.s = s;
    return p;
}

TransportCoefficients predicted_transport(const ParameterSet& p, const SchemeDescriptor& sc) {
    TransportCoefficients t;
    const double L2 = sc.lambda * sc.lambda, dt = sc.dt;
    const double s5 = p.sigma(4), s7 = p.sigma(6);
    const double c2 = p.c0 * p.c0;
    switch (sc.name) {
        case SchemeName::D2Q9:
            t.nu = L2 / 3.0 * s5 * dt;
            t.kappa = L2 / 12.0 * (4.0 + 4.0 * p.beta2 - p.alpha2) * s7 * dt;
            break;
        case SchemeName::D2Q13:
            t.nu = 0.5 * c2 * L2 * s5 * dt;
            t.kappa = L2 / (154.0 * c2) * (28.0 * p.beta2 + 140.0 - p.alpha2) * s7 * dt;
            break;
        case SchemeName::D2Q17:
            t.nu = 0.5 * c2 * L2 * s5 * dt;
            t.kappa = L2 / (218.0 * c2) * (60.0 * p.beta2 + 620.0 - p.alpha2) * s7 * dt;
            break;
    }
    t.kappa_nonpositive = !(t.kappa > 0.0);
    t.prandtl = t.nu / t.kappa;
    return t;
}

ValidationReport validate(const ParameterSet& p, const SchemeDescriptor& sc, IsotropyLevel level) {
    ValidationReport rep;
    auto add = [&](std::string name, double value, double target) {
        const double res = value - target;
        const bool ok = std::abs(res) <= 1e-12 * std::max(1.0, std::abs(target));
        rep.checks.push_back({std::move(name), res, ok});
    };
    const SchemeName sn = sc.name;
    const int q = sc.q;
    if (static_cast<int>(p.s.size()) != q) {
        rep.checks.push_back({"rate vector size", double(p.s.size()) - q, false});
        return rep;
    }
    for (int k = 0; k < 4; ++k) add("s[" + std::to_string(k) + "] = 0 (conserved)", p.s[k], 0.0);
    for (int k = 4; k < q; ++k) {
        const bool ok = p.s[k] > 0.0 && p.s[k] < 2.0;
        rep.checks.push_back({"s[" + std::to_string(k) + "] in (0,2)", ok ? 0.0 : p.s[k], ok});
        if (int o = pair_of(sn, k); o > k)
            add("sigma" + std::to_string(k) + " = sigma" + std::to_string(o), p.sigma(k), p.sigma(o));
    }
    add("c1 heat-flux slope", p.c1, c1_of(sn, p.c0));
    if (level == IsotropyLevel::none) return rep;

    if (sn == SchemeName::D2Q9) add("c0 = sqrt(2/3)", p.c0, std::sqrt(2.0 / 3.0));
    if (sn == SchemeName::D2Q13) add("c2 = (62 - 63 c0^2)/12", p.c2, c2_of(sn, p.c0));
    if (sn == SchemeName::D2Q17) {
        const auto t = tau_coefficients(p).c;
        const auto& r = p.r_coeffs;
        for (int i : {0, 2, 3, 4, 5, 7}) add("tau coefficient " + std::to_string(i) + " follows r", t[i], -15.5 * r[i]);
    }
    if (level == IsotropyLevel::second_order) return rep;

    const double sig5 = p.sigma(4), sig7 = p.sigma(6);
    add("sigma7 = 1/(12 sigma5)", sig7, 1.0 / (12.0 * sig5));
    if (sn == SchemeName::D2Q13) {
        add("c0 = 2/sqrt(5)", p.c0, 2.0 / std::sqrt(5.0));
        add("sigma9 = sigma7", p.sigma(8), sig7);
        add("sigma13 = sigma5", p.sigma(12), sig5);
        add("xi_x = 0", p.xi_x, 0.0);
        const auto h = d2q13_alpha3_beta3(sig5, p.alpha2, p.beta2);
        add("alpha3", p.alpha3, h.alpha3);
        add("beta3", p.beta3, h.beta3);
    }
    if (sn == SchemeName::D2Q17) {
        add("c2 = (31 - 21 c0^2)/6", p.c2, c2_of(sn, p.c0));
        add("c3 = (555 c0^2 - 596)/24", p.c3, c3_of(p.c0));
        const auto t = tau_coefficients(p).c;
        add("r_x = c2 j_x", p.r_coeffs[1], p.c2);
        add("r_y = c2 j_y", p.r_coeffs[6], p.c2);
        for (int i : {0, 2, 3, 4, 5, 7}) add("r coefficient " + std::to_string(i) + " = 0", p.r_coeffs[i], 0.0);
        add("tau_x = c3 j_x", t[1], p.c3);
        add("tau_y = c3 j_y", t[6], p.c3);
        add("sigma9 = sigma7", p.sigma(8), sig7);
        add("sigma13 = sigma5", p.sigma(12), sig5);
        add("sigma15 = sigma7", p.sigma(15), sig7);
        const auto h = d2q17_alpha_beta(p.alpha2, p.beta2);
        add("alpha3", p.alpha3, h.alpha3);
        add("beta3", p.beta3, h.beta3);
        add("alpha4", p.alpha4, h.alpha4);
        add("beta4", p.beta4, h.beta4);
        add("xi_x = 0", p.xi_x, 0.0);
        add("xi_y = 0", p.xi_y, 0.0);
    }
    return rep;
}

}  // namespace eclbm
