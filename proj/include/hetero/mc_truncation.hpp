#ifndef HETERO_MC_TRUNCATION_HPP
#define HETERO_MC_TRUNCATION_HPP

#include <json.hpp>

#include "hetero/cauchy.hpp"
#include "hetero/kernels.hpp"
#include "hetero/potentials.hpp"

namespace hetero {

// Truncation data for the mean-curvature kernel. The quadratic cap glues
// C^1 to 1/sqrt(1+t^2) at sqrt(L) and flattens to the constant y_L at
// sqrt(L+1).
struct TruncationParams {
    double L = 0.0;
    double x_L = 0.0;  // sqrt(1+L)/(4(1+L)^2)
    double y_L = 0.0;  // (4L+3)*x_L
    double l_L = 0.0;  // (6L+6-L^2)/(4L+4) for L <= 1, (7+4L)/(4L+4) otherwise
    double m_L = 2.0;

    static TruncationParams make(double L);
};

// Truncated kernel value: 1/sqrt(1+t^2) below sqrt(L), quadratic cap on
// [sqrt(L), sqrt(L+1)], constant y_L beyond.
double phi_L(const TruncationParams& params, double t);
double phi_L_prime(const TruncationParams& params, double t);

// Untruncated mean-curvature kernel 1/sqrt(1+t^2). Residual checks only;
// it has no positive lower growth exponent.
double mc_kernel_untruncated(double t);

// PhiKernel wrapper for phi_L with declared exponents (l_L, 2).
PhiKernel make_mc_truncated(double L);

struct SlopeCertificate {
    double max_slope = 0.0;
    double slope_cap = 0.0;  // sqrt(L)
    bool passed = false;
    // sup |-(phi(|q'|)q')' + V'(q)| with the untruncated kernel, centered
    // differences on interior samples.
    double untruncated_residual_sup = 0.0;
};

// Solves the truncated problem with the Cauchy route and certifies that the
// slope stays below sqrt(L), so the profile also solves the untruncated
// mean-curvature equation.
std::pair<HeteroclinicProfile, SlopeCertificate> solve_mc(const Potential& P, double L,
                                                          const SolverConfig& cfg = {});

struct McSandwichReport {
    double kappa = 0.0;       // sqrt(y_L (l_L - 1)) at L = max_slope^2
    double L_effective = 0.0;
    double lower_margin = 0.0;  // min over t>=0 of q(t) - alpha tanh(alpha sqrt2 t)
    double upper_margin = 0.0;  // min over t>=0 of alpha tanh(alpha sqrt2 t / kappa) - q(t)
    bool passed = false;
};

// Checks alpha tanh(alpha sqrt2 t) <= q(t) <= alpha tanh(alpha sqrt2 t/kappa)
// for t >= 0, with kappa evaluated at the certified slope.
McSandwichReport mc_sandwich_check(const HeteroclinicProfile& profile, double alpha,
                                   const TruncationParams& params, double slack = 1e-9);

}  // namespace hetero

#endif
