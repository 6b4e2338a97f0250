#ifndef HETERO_KERNELS_HPP
#define HETERO_KERNELS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hetero/common.hpp"

namespace hetero {

// Operator kernel phi of the quasilinear term -(phi(|u'|)u')'. Immutable
// after construction; all evaluations are pure.
struct PhiKernel {
    std::function<double(double)> phi;        // t > 0 -> phi(t)
    std::function<double(double)> phi_prime;  // t > 0 -> phi'(t)
    double l = 0.0;                           // lower growth exponent, > 1
    double m = 0.0;                           // upper growth exponent, >= l
    std::string name;
    nlohmann::json spec;  // {"kind":..., "params":{...}}

    // (phi(t)t)' = phi'(t)t + phi(t)
    double phi_t_prime(double t) const { return phi_prime(t) * t + phi(t); }
};

// Phi(t) = int_0^t s*phi(s) ds by adaptive Simpson, absolute error <= tol.
double big_phi(const PhiKernel& k, double t, double tol = 1e-12);

// G(t) = int_0^t s*(phi'(s)s + phi(s)) ds by adaptive Simpson.
double big_g(const PhiKernel& k, double t, double tol = 1e-12);

// Inverse of G: returns t >= 0 with |G(t) - v| <= tol*max(1, v). Bracket
// expansion, bisection, then safeguarded Newton (G'(t) = t*(phi(t)t)' > 0).
double big_g_inverse(const PhiKernel& k, double v, double tol = 1e-12);

// (1 + min, 1 + max) of (phi'(t)t + phi(t))/phi(t) over the grid.
std::pair<double, double> estimate_exponents(const PhiKernel& k,
                                             const std::vector<double>& grid);

// Legendre conjugate Phi~(s) = max_{t>=0} { s t - Phi(t) }; the maximizer
// solves phi(t)t = s.
double legendre_conjugate(const PhiKernel& k, double s, double tol = 1e-12);

// Default log-spaced certification grid, 2048 points on [1e-8, 1e8].
std::vector<double> exponent_grid();

struct KernelCertificate {
    bool phi1_ok = false;  // phi > 0 and (phi t)' > 0
    bool phi2_ok = false;  // declared [l-1, m-1] contains the sampled ratio range
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    bool ok() const { return phi1_ok && phi2_ok; }
};

// Samples hypotheses (phi1)-(phi2) on the certification grid, slack 1e-9.
KernelCertificate certify_kernel(const PhiKernel& k);

// Kernel builders. Declared (l, m) noted per builder.
PhiKernel make_p_power(double p);                      // phi = t^{p-2}, l = m = p
PhiKernel make_mixed(double p, double q);              // t^{p-2} + t^{q-2}, l = p, m = q
PhiKernel make_gamma_power(double gamma);              // Phi = (1+t^2)^g - 1, l = 2, m = 2g
PhiKernel make_plog(double p);                         // Phi = t^p ln(1+t), l = p, m = p+1
PhiKernel make_sinh_integral(double gamma, double beta);  // l = 2-g, m = 2-g+b

// Representative instances of every builder family.
std::vector<PhiKernel> kernel_catalog();

// JSON round trip for kernel selection:
// {"kind": "p-power"|"mixed"|"gamma-power"|"plog"|"sinh-integral"|"mc-truncated",
//  "params": {...}}
PhiKernel kernel_from_json(const nlohmann::json& j);

// Cumulative tables for Phi and G on a graded mesh with cubic Hermite
// interpolation (exact end-slopes t*phi and t*(phi t)'). Direct quadrature
// stays the ground truth in tests; tables exist to keep ODE stepping and
// action evaluation off the quadrature path. Immutable once built.
class BigPhiTable {
  public:
    BigPhiTable(const PhiKernel& k, double t_hi, int n_cells = 4096);

    double phi_value(double t) const;  // Phi(|t|)
    double g_value(double t) const;    // G(t), t >= 0
    double g_inverse(double v) const;  // t with G(t) = v
    double t_hi() const { return grid_.back(); }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& Phi_values() const { return Phi_; }
    const std::vector<double>& G_values() const { return G_; }

  private:
    double eval(const std::vector<double>& vals, bool g_slope, double t) const;

    PhiKernel k_;
    std::vector<double> grid_;
    std::vector<double> Phi_;
    std::vector<double> G_;
    std::vector<double> dPhi_;  // t*phi(t) at nodes
    std::vector<double> dG_;    // t*(phi(t)t)' at nodes
};

}  // namespace hetero

#endif
