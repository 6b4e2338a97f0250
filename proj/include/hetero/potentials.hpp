#ifndef HETERO_POTENTIALS_HPP
#define HETERO_POTENTIALS_HPP

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hetero/kernels.hpp"

namespace hetero {

// Double-well potential with derivative and structural metadata. Immutable
// after construction; evaluations are pure.
struct Potential {
    std::function<double(double)> V;
    std::function<double(double)> V_prime;
    double well_low = 0.0;
    double well_high = 0.0;
    double rho = 0.0;  // certified strict-convexity radius around each well
    std::string name;

    nlohmann::json spec;           // {"kind":..., "params":{...}}
    bool even_symmetric = false;   // V(t) == V(-t) (or mirror symmetry about the midpoint)
    // Nonempty when V(t) = Phi(|t^2 - alpha^2|) for the kernel of that name;
    // enables the tanh sandwich checks.
    std::string phi_dw_kernel_name;

    double well_gap() const { return well_high - well_low; }
    double midpoint() const { return 0.5 * (well_low + well_high); }
};

// V(t) = Phi(|t^2 - alpha^2|) built from the kernel's Phi by a cumulative
// table; wells at +-alpha.
Potential phi_double_well(const PhiKernel& k, double alpha);

// V(t) = |t^2 - alpha^2|^p / p, closed form.
Potential p_double_well(double p, double alpha);

// V(t) = (t^2 - alpha^2)^2.
Potential quartic_well(double alpha);

// V(t) = |(t - a)(t - b)|^p / p with wells a < b.
Potential asymmetric_well(double p, double a, double b);

// Raw constructor for user-supplied functions (certification may fail).
Potential raw_potential(std::function<double(double)> V, std::function<double(double)> Vp,
                        double well_low, double well_high, const std::string& name);

struct PotentialCertificate {
    bool v1_ok = false;  // nonnegative on the sampled interval
    bool v2_ok = false;  // V(wells) = 0, V > 0 strictly between
    bool v5_ok = false;  // strictly convex near both wells
    double rho = 0.0;    // largest certified convexity radius
    // Fitted envelope constants for (V3): a1..a4 as sampled ratio extrema of
    // V / Phi(|t -+ well|) near each well.
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    // Fitted envelope constants for (V4) with unit inner scalings:
    // ratios of -V' to t*phi(|t -+ well|)|t -+ well|.
    double c1 = 0.0, c3 = 0.0, c5 = 0.0, c7 = 0.0;
    bool v3_ok = false;
    bool v4_ok = false;
    double sup_V_prime = 0.0;  // sup |V'| between the wells
    bool ok() const { return v1_ok && v2_ok && v3_ok && v4_ok && v5_ok; }
};

// Scans (V1)-(V5) on a grid spanning [well_low, well_high]; report-valued.
PotentialCertificate certify_hypotheses(const Potential& P, const PhiKernel& k,
                                        int grid_points = 2001);

// JSON: {"kind": "phi-dw"|"p-dw"|"quartic"|"asym", "params": {...}}.
// "phi-dw" takes its Phi from the supplied kernel.
Potential potential_from_json(const nlohmann::json& j, const PhiKernel& k);

}  // namespace hetero

#endif
