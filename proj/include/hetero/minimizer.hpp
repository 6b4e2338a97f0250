#ifndef HETERO_MINIMIZER_HPP
#define HETERO_MINIMIZER_HPP

#include <vector>

#include "hetero/cauchy.hpp"
#include "hetero/kernels.hpp"
#include "hetero/potentials.hpp"

namespace hetero {

// Truncated, clamped discretization of the action F(u) = int Phi(|u'|) + V(u).
struct DiscreteAction {
    double T = 12.0;  // half-width of the truncated domain [-T, T]
    int N = 4001;     // interior node count
    std::pair<double, double> boundary{0.0, 0.0};  // clamped endpoint values

    double h() const { return 2.0 * T / (N + 1); }
    double node_time(int j) const { return -T + (j + 1) * h(); }  // j in [0, N)
};

// Clamped linear ramp (the admissible competitor), affinely adapted for
// asymmetric wells: u(t) = clamp(midpoint + t, well_low, well_high).
std::vector<double> initial_ramp(const DiscreteAction& D, const Potential& P);

// Composite action: forward differences in Phi, trapezoid in V, over the
// N+1 cells including the clamped endpoints.
double action_value(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                    const std::vector<double>& u);

// Serial reference implementation; the parallel version must match it.
double action_value_serial(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                           const std::vector<double>& u);

// Analytic gradient of the discrete action at interior nodes.
void action_gradient(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                     const std::vector<double>& u, std::vector<double>& grad);
void action_gradient_serial(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                            const std::vector<double>& u, std::vector<double>& grad);

struct MinimizeOptions {
    double gtol = 1e-9;      // sup-norm gradient stopping tolerance
    long max_iters = 200000;
    bool use_newton = true;  // damped Newton on the gradient (tridiagonal Jacobian)
    bool use_cg = true;      // fallback path: Polak-Ribiere over plain descent
};

struct MinimizeResult {
    std::vector<double> u;
    long iterations = 0;
    double grad_norm = 0.0;   // final sup-norm
    double action = 0.0;
    bool converged = false;
};

// Descent with Armijo backtracking; monotone in the action value.
MinimizeResult minimize_action(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                               const std::vector<double>& u0, const MinimizeOptions& opts = {});

// Re-centers the grid so the anchor crossing (linear interpolation) sits at
// t = 0; returns the applied shift.
double normalize_translation(std::vector<double>& times, const std::vector<double>& values,
                             double anchor);

// Packages a minimizer result as a profile (route = variational, q' by
// central differences, translation-normalized to the anchor).
HeteroclinicProfile variational_profile(const DiscreteAction& D, const PhiKernel& k,
                                        const Potential& P, const MinimizeResult& res,
                                        double anchor);

}  // namespace hetero

#endif
