#include "eclbm/scheme.hpp"

#include <stdexcept>

namespace eclbm {

SchemeName parse_scheme_name(std::string_view s) {
    if (s == "D2Q9" || s == "d2q9") return SchemeName::D2Q9;
    if (s == "D2Q13" || s == "d2q13") return SchemeName::D2Q13;
    if (s == "D2Q17" || s == "d2q17") return SchemeName::D2Q17;
    throw std::invalid_argument("unknown scheme name: " + std::string(s));
}

std::string to_string(SchemeName s) {
    switch (s) {
        case SchemeName::D2Q9: return "D2Q9";
        case SchemeName::D2Q13: return "D2Q13";
        case SchemeName::D2Q17: return "D2Q17";
    }
    return "?";
}

namespace {

const std::vector<std::array<int, 2>>& velocities(SchemeName name) {
    static const std::vector<std::array<int, 2>> v9 = {
        {0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    static const std::vector<std::array<int, 2>> v13 = [] {
        auto v = v9;
        v.insert(v.end(), {{2, 0}, {0, 2}, {-2, 0}, {0, -2}});
        return v;
    }();
    static const std::vector<std::array<int, 2>> v17 = [] {
        auto v = v13;
        v.insert(v.end(), {{2, 2}, {-2, 2}, {-2, -2}, {2, -2}});
        return v;
    }();
    switch (name) {
        case SchemeName::D2Q9: return v9;
        case SchemeName::D2Q13: return v13;
        case SchemeName::D2Q17: return v17;
    }
    throw std::invalid_argument("bad scheme");
}

std::vector<std::string> labels(SchemeName name) {
    std::vector<std::string> l = {"rho", "jx", "jy", "E", "XX", "XY", "qx", "qy"};
    switch (name) {
        case SchemeName::D2Q9: l.push_back("E2"); break;
        case SchemeName::D2Q13: l.insert(l.end(), {"rx", "ry", "E2", "E3", "XXe"}); break;
        case SchemeName::D2Q17:
            l.insert(l.end(), {"rx", "ry", "taux", "tauy", "XXe", "XYe", "E2", "E3", "E4"});
            break;
    }
    return l;
}

int q_of(SchemeName name) {
    switch (name) {
        case SchemeName::D2Q9: return 9;
        case SchemeName::D2Q13: return 13;
        case SchemeName::D2Q17: return 17;
    }
    return 0;
}

double p9(int k, double X, double Y, double L) {
    const double L2 = L * L, R = X * X + Y * Y;
    switch (k) {
        case 0: return 1.0;
        case 1: return X;
        case 2: return Y;
        case 3: return -4.0 * L2 + 3.0 * R;
        case 4: return X * X - Y * Y;
        case 5: return X * Y;
        case 6: return X * (-5.0 * L2 + 3.0 * R);
        case 7: return Y * (-5.0 * L2 + 3.0 * R);
        case 8: return 4.0 * L2 * L2 - 10.5 * L2 * R + 4.5 * R * R;
    }
    throw std::out_of_range("D2Q9 polynomial index");
}

double p13(int k, double X, double Y, double L) {
    const double L2 = L * L, L4 = L2 * L2, L6 = L4 * L2, R = X * X + Y * Y;
    const double pr = 101.0 / 6.0 * L4 - 63.0 / 4.0 * L2 * R + 35.0 / 12.0 * R * R;
    switch (k) {
        case 0: return 1.0;
        case 1: return X;
        case 2: return Y;
        // printed without lambda^2; read dimensionally
        case 3: return -28.0 * L2 + 13.0 * R;
        case 4: return X * X - Y * Y;
        case 5: return X * Y;
        case 6: return X * (-3.0 * L2 + R);
        case 7: return Y * (-3.0 * L2 + R);
        case 8: return X * pr;
        case 9: return Y * pr;
        case 10: return 140.0 * L4 - 361.0 / 2.0 * L2 * R + 77.0 / 2.0 * R * R;
        case 11:
            return -12.0 * L6 + 581.0 / 12.0 * L4 * R - 273.0 / 8.0 * L2 * R * R +
                   137.0 / 24.0 * R * R * R;
        case 12: return (X * X - Y * Y) * (-65.0 / 12.0 * L2 + 17.0 / 12.0 * R);
    }
    throw std::out_of_range("D2Q13 polynomial index");
}

double p17(int k, double X, double Y, double L) {
    const double L2 = L * L, L4 = L2 * L2, L6 = L4 * L2, L8 = L4 * L4, R = X * X + Y * Y;
    const double R2 = R * R, R3 = R2 * R;
    const double pr = 47.0 / 6.0 * L4 - 17.0 / 4.0 * L2 * R + 5.0 / 12.0 * R2;
    const double pt = -7429.0 / 42.0 * L6 + 1565.0 / 8.0 * L4 * R - 2635.0 / 48.0 * L2 * R2 +
                      465.0 / 112.0 * R3;
    switch (k) {
        case 0: return 1.0;
        case 1: return X;
        case 2: return Y;
        case 3: return -60.0 * L2 + 17.0 * R;
        case 4: return X * X - Y * Y;
        case 5: return X * Y;
        case 6: return X * (-17.0 * L2 + 3.0 * R);
        case 7: return Y * (-17.0 * L2 + 3.0 * R);
        case 8: return X * pr;
        case 9: return Y * pr;
        case 10: return X * pt;
        case 11: return Y * pt;
        case 12: return (X * X - Y * Y) * (-65.0 / 12.0 * L2 + 17.0 / 12.0 * R);
        case 13: return X * Y * (-65.0 / 12.0 * L2 + 17.0 / 24.0 * R);
        case 14: return 620.0 * L4 - 969.0 / 2.0 * L2 * R + 109.0 / 2.0 * R2;
        case 15:
            return -16740.0 * L6 + 330361.0 / 12.0 * L4 * R - 74485.0 / 8.0 * L2 * R2 +
                   18445.0 / 24.0 * R3;
        case 16:
            return 84.0 * L8 - 24055.0 / 56.0 * L6 * R + 35425.0 / 96.0 * L4 * R2 -
                   6035.0 / 64.0 * L2 * R3 + 9193.0 / 1344.0 * R2 * R2;
    }
    throw std::out_of_range("D2Q17 polynomial index");
}

}  // namespace

double moment_polynomial(SchemeName name, int k, double X, double Y, double lambda) {
    switch (name) {
        case SchemeName::D2Q9: return p9(k, X, Y, lambda);
        case SchemeName::D2Q13: return p13(k, X, Y, lambda);
        case SchemeName::D2Q17: return p17(k, X, Y, lambda);
    }
    throw std::invalid_argument("bad scheme");
}

MomentIndex moment_index(SchemeName name) {
    MomentIndex m;
    switch (name) {
        case SchemeName::D2Q9: m.E2 = 8; break;
        case SchemeName::D2Q13:
            m.rx = 8; m.ry = 9; m.E2 = 10; m.E3 = 11; m.XXe = 12;
            break;
        case SchemeName::D2Q17:
            m.rx = 8; m.ry = 9; m.tx = 10; m.ty = 11; m.XXe = 12; m.XYe = 13;
            m.E2 = 14; m.E3 = 15; m.E4 = 16;
            break;
    }
    return m;
}

EnergyMap energy_map(SchemeName name) {
    switch (name) {
        case SchemeName::D2Q9: return {6.0, 4.0};
        case SchemeName::D2Q13: return {26.0, 28.0};
        case SchemeName::D2Q17: return {34.0, 60.0};
    }
    throw std::invalid_argument("bad scheme");
}

double energy_numeric_from_physical(const SchemeDescriptor& s, double rho, double eps) {
    const auto [a, b] = energy_map(s.name);
    return a * eps - b * s.lambda * s.lambda * rho;
}

double energy_physical_from_numeric(const SchemeDescriptor& s, double rho, double E) {
    const auto [a, b] = energy_map(s.name);
    return (E + b * s.lambda * s.lambda * rho) / a;
}

SchemeDescriptor build_scheme(SchemeName name, double lambda, double dx) {
    if (!(lambda > 0.0) || !(dx > 0.0))
        throw std::invalid_argument("build_scheme: lambda and dx must be positive");
    SchemeDescriptor s;
    s.name = name;
    s.q = q_of(name);
    s.xi = velocities(name);
    s.lambda = lambda;
    s.dx = dx;
    s.dt = dx / lambda;
    s.moment_labels = labels(name);
    s.idx = moment_index(name);
    s.M.resize(s.q, s.q);
    for (int k = 0; k < s.q; ++k)
        for (int j = 0; j < s.q; ++j)
            s.M(k, j) = moment_polynomial(name, k, lambda * s.xi[j][0], lambda * s.xi[j][1], lambda);
    s.Minv = s.M.partialPivLu().inverse();
    return s;
}

}  // namespace eclbm
