#ifndef HETERO_CAUCHY_HPP
#define HETERO_CAUCHY_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hetero/kernels.hpp"
#include "hetero/potentials.hpp"

namespace hetero {

enum class Route { cauchy, variational };

// Sampled heteroclinic trajectory. q' on the cauchy route is recomputed as
// G^{-1}(V(q)) at sample times, so the energy residual G(q') - V(q) checks
// the integrator, not the derivative bookkeeping.
struct HeteroclinicProfile {
    std::vector<double> t;        // strictly increasing, uniform
    std::vector<double> q;
    std::vector<double> q_prime;
    std::vector<double> energy_residual;  // G(q') - V(q), direct quadrature
    std::pair<double, double> wells{0.0, 0.0};
    Route route = Route::cauchy;
    double normalization_shift = 0.0;

    // Raw accepted integrator steps (cauchy route only).
    std::vector<double> t_raw;
    std::vector<double> q_raw;

    std::string kernel_name;
    std::string potential_name;

    std::size_t size() const { return t.size(); }
};

struct SolverConfig {
    double rel_tol = 1e-13;
    double abs_tol = 1e-13;
    double t_max = 0.0;         // 0 -> 40 / well gap
    double tail_epsilon = 0.0;  // 0 -> 1e-12 * well gap; stop inside this well distance
    long max_steps = 2000000;
    double sample_step = 1e-2;  // uniform output grid spacing
};

// Integrates y' = G^{-1}(V(y)), y(0) = anchor, forward and backward
// (backward as forward integration of the reflected problem). Adaptive
// embedded Runge-Kutta 4(5); steps land exactly on the output grid.
HeteroclinicProfile solve_cauchy(const PhiKernel& k, const Potential& P, double anchor,
                                 const SolverConfig& cfg = {});

// Evaluates q at arbitrary s by cubic Hermite interpolation of the uniform
// samples (q' values are the exact slopes on the cauchy route).
double interp_q(const HeteroclinicProfile& p, double s);

// Derivative of the same Hermite interpolant.
double interp_q_prime(const HeteroclinicProfile& p, double s);

struct DecayFit {
    // alpha - q(t) <= theta1 e^{-theta2 t} (right tail), alpha + q <= theta3 e^{theta4 t} (left)
    double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0, theta4 = 0.0;
    // same for q'
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0;
};

// Log-linear least squares on the outer tail_fraction of samples per side.
// Samples indistinguishable from the stopping tolerance are dropped.
DecayFit fit_decay(const HeteroclinicProfile& profile, double tail_fraction = 0.25);

enum class OracleKind { p_tanh, asym_logistic, quartic_classic };

struct OracleParams {
    double p = 2.0;
    double alpha = 1.0;  // p_tanh / quartic_classic
    double a = 0.0, b = 1.0;  // asym_logistic wells
};

// Exact closed-form heteroclinics for oracle comparison.
std::function<double(double)> closed_form_oracle(OracleKind kind, const OracleParams& params);

}  // namespace hetero

#endif
