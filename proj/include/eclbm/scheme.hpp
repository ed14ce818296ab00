#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace eclbm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

enum class SchemeName { D2Q9, D2Q13, D2Q17 };

SchemeName parse_scheme_name(std::string_view s);
std::string to_string(SchemeName s);

// Positions of the named moments; -1 when the scheme lacks the moment.
struct MomentIndex {
    int rho = 0, jx = 1, jy = 2, E = 3;
    int XX = 4, XY = 5, qx = 6, qy = 7;
    int rx = -1, ry = -1, tx = -1, ty = -1;
    int XXe = -1, XYe = -1;
    int E2 = -1, E3 = -1, E4 = -1;
};

struct SchemeDescriptor {
    SchemeName name = SchemeName::D2Q9;
    int q = 0;
    std::vector<std::array<int, 2>> xi;
    double lambda = 1.0;
    double dx = 1.0;
    double dt = 1.0;
    Mat M;
    Mat Minv;
    std::vector<std::string> moment_labels;
    std::array<int, 4> conserved_indices{0, 1, 2, 3};
    MomentIndex idx;
};

SchemeDescriptor build_scheme(SchemeName name, double lambda = 1.0, double dx = 1.0);

// Value of polynomial p_k at velocity (X, Y).
double moment_polynomial(SchemeName name, int k, double X, double Y, double lambda);

MomentIndex moment_index(SchemeName name);

// E = a*eps - b*lambda^2*rho
struct EnergyMap {
    double a;
    double b;
};
EnergyMap energy_map(SchemeName name);

double energy_numeric_from_physical(const SchemeDescriptor& s, double rho, double eps);
double energy_physical_from_numeric(const SchemeDescriptor& s, double rho, double E);

}  // namespace eclbm
