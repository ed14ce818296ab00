#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eclbm/equilibrium.hpp"
#include "eclbm/scheme.hpp"

namespace eclbm {

enum class IsotropyLevel { none, second_order, full };

IsotropyLevel parse_isotropy_level(const std::string& s);
std::string to_string(IsotropyLevel l);

// Free inputs. Rates are keyed by moment index (0-based). Rates that a
// constraint fixes are derived; supplying one anyway is an error.
struct FreeParameters {
    SchemeName scheme = SchemeName::D2Q9;
    double lambda = 1.0;
    double dx = 1.0;
    std::optional<double> c0;  // units of lambda
    double sigma5 = 0.05;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    std::map<int, double> rates;
    std::optional<double> xi_x, xi_y;
    // explicit overrides for second_order / none levels
    std::optional<double> alpha3, beta3, alpha4, beta4;
    bool include_velocity_square_in_heat_flux = false;
    IsotropyLevel isotropy = IsotropyLevel::full;
};

struct ConstraintViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ParameterSet derive_parameters(const FreeParameters& fp);

// Rate indices that are fixed by constraints at a given level.
std::vector<int> derived_rate_indices(SchemeName s, IsotropyLevel level);

// Closed forms used by derive_parameters, exposed for tests.
struct D2Q13Higher {
    double alpha3, beta3, n_alpha, n_beta;
};
D2Q13Higher d2q13_alpha3_beta3(double sigma5, double alpha2, double beta2);

struct D2Q17Higher {
    double alpha3, beta3, alpha4, beta4;
};
D2Q17Higher d2q17_alpha_beta(double alpha2, double beta2);

struct TransportCoefficients {
    double nu = 0.0;
    double kappa = 0.0;
    std::optional<double> gamma_acoustic;
    double prandtl = 0.0;
    bool kappa_nonpositive = false;
};

TransportCoefficients predicted_transport(const ParameterSet& p, const SchemeDescriptor& sc);

struct ConstraintCheck {
    std::string name;
    double residual = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<ConstraintCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

ValidationReport validate(const ParameterSet& p, const SchemeDescriptor& sc, IsotropyLevel level);

}  // namespace eclbm
