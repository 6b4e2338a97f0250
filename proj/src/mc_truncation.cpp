#include "hetero/mc_truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetero {

TruncationParams TruncationParams::make(double L) {
    if (!(L > 0.0)) throw construction_error("TruncationParams: L must be positive");
    TruncationParams p;
    p.L = L;
    p.x_L = std::sqrt(1.0 + L) / (4.0 * (1.0 + L) * (1.0 + L));
    p.y_L = (4.0 * L + 3.0) * p.x_L;
    p.l_L = (L <= 1.0) ? (6.0 * L + 6.0 - L * L) / (4.0 * L + 4.0)
                       : (7.0 + 4.0 * L) / (4.0 * L + 4.0);
    p.m_L = 2.0;
    return p;
}

double phi_L(const TruncationParams& params, double t) {
    if (t < 0.0) throw evaluation_error("phi_L: t must be nonnegative");
    const double sL = std::sqrt(params.L);
    const double sL1 = std::sqrt(params.L + 1.0);
    if (t <= sL) return 1.0 / std::sqrt(1.0 + t * t);
    if (t <= sL1) {
        const double w = t * t - params.L - 1.0;
        return params.x_L * w * w + params.y_L;
    }
    return params.y_L;
}

double phi_L_prime(const TruncationParams& params, double t) {
    if (t < 0.0) throw evaluation_error("phi_L_prime: t must be nonnegative");
    const double sL = std::sqrt(params.L);
    const double sL1 = std::sqrt(params.L + 1.0);
    if (t <= sL) {
        const double s = std::sqrt(1.0 + t * t);
        return -t / (s * s * s);
    }
    if (t <= sL1) return 4.0 * params.x_L * (t * t - params.L - 1.0) * t;
    return 0.0;
}

double mc_kernel_untruncated(double t) { return 1.0 / std::sqrt(1.0 + t * t); }

PhiKernel make_mc_truncated(double L) {
    const TruncationParams p = TruncationParams::make(L);
    PhiKernel k;
    k.phi = [p](double t) { return phi_L(p, t); };
    k.phi_prime = [p](double t) { return phi_L_prime(p, t); };
    k.l = p.l_L;
    k.m = p.m_L;
    k.name = "mc-truncated(L=" + std::to_string(L) + ")";
    k.spec = {{"kind", "mc-truncated"}, {"params", {{"L", L}}}};
    return k;
}

std::pair<HeteroclinicProfile, SlopeCertificate> solve_mc(const Potential& P, double L,
                                                          const SolverConfig& cfg) {
    const PhiKernel k = make_mc_truncated(L);
    HeteroclinicProfile prof = solve_cauchy(k, P, P.midpoint(), cfg);

    SlopeCertificate cert;
    cert.slope_cap = std::sqrt(L);
    for (double qp : prof.q_prime) cert.max_slope = std::max(cert.max_slope, qp);
    cert.passed = cert.max_slope < cert.slope_cap;

    // Residual of the untruncated equation -(phi(|q'|)q')' + V'(q), centered
    // differences with step 1e-4; interior samples only (two-cell margin).
    const double h_fd = 1e-4;
    auto w = [&](double s) {
        const double qp = interp_q_prime(prof, s);
        return mc_kernel_untruncated(std::fabs(qp)) * qp;
    };
    double sup = 0.0;
    for (std::size_t i = 2; i + 2 < prof.size(); ++i) {
        const double t = prof.t[i];
        const double r = -(w(t + h_fd) - w(t - h_fd)) / (2.0 * h_fd) + P.V_prime(prof.q[i]);
        sup = std::max(sup, std::fabs(r));
    }
    cert.untruncated_residual_sup = sup;
    return {std::move(prof), cert};
}

McSandwichReport mc_sandwich_check(const HeteroclinicProfile& profile, double alpha,
                                   const TruncationParams& params, double slack) {
    McSandwichReport rep;
    double max_slope = 0.0;
    for (double qp : profile.q_prime) max_slope = std::max(max_slope, qp);
    rep.L_effective = max_slope * max_slope;
    const TruncationParams eff = TruncationParams::make(rep.L_effective);
    rep.kappa = std::sqrt(eff.y_L * (eff.l_L - 1.0));

    const double rate = std::sqrt(2.0) * alpha;
    rep.lower_margin = std::numeric_limits<double>::infinity();
    rep.upper_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double t = profile.t[i];
        if (t < 0.0) continue;
        const double q = profile.q[i];
        rep.lower_margin = std::min(rep.lower_margin, q - alpha * std::tanh(rate * t));
        rep.upper_margin =
            std::min(rep.upper_margin, alpha * std::tanh(rate * t / rep.kappa) - q);
    }
    rep.passed = rep.lower_margin >= -slack && rep.upper_margin >= -slack;
    return rep;
}

}  // namespace hetero
