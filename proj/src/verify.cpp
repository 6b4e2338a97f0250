#include "hetero/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetero {

bool VerificationReport::all_passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) return false;
    return true;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

CheckResult min_margin_check(const std::string& name, const HeteroclinicProfile& p,
                             const std::function<double(std::size_t)>& margin_at,
                             std::size_t begin, std::size_t end, double slack = 0.0) {
    CheckResult r;
    r.name = name;
    r.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
        const double m = margin_at(i);
        if (m < r.margin) {
            r.margin = m;
            r.location = p.t[i];
        }
    }
    r.status = (r.margin >= -slack) ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

}  // namespace

VerificationReport run_all(const HeteroclinicProfile& p, const PhiKernel& k,
                           const Potential& P, const VerifyOptions& options) {
    VerificationReport rep;
    rep.route = (p.route == Route::cauchy) ? "cauchy" : "variational";
    rep.kernel_name = k.name;
    rep.potential_name = P.name;
    const std::size_t n = p.size();

    rep.checks.push_back(min_margin_check(
        "monotonicity", p, [&](std::size_t i) { return p.q[i + 1] - p.q[i]; }, 0, n - 1));

    rep.checks.push_back(min_margin_check(
        "strict_bounds", p,
        [&](std::size_t i) {
            return std::min(p.q[i] - p.wells.first, p.wells.second - p.q[i]);
        },
        0, n));

    rep.checks.push_back(min_margin_check(
        "qprime_positive", p, [&](std::size_t i) { return p.q_prime[i]; }, 0, n));

    if (p.route == Route::cauchy) {
        rep.checks.push_back(min_margin_check(
            "energy_residual", p,
            [&](std::size_t i) {
                return options.energy_tol - std::fabs(p.energy_residual[i]);
            },
            0, n));
    } else {
        rep.checks.push_back({"energy_residual", CheckStatus::skipped, 0.0, 0.0});
    }

    // Tanh sandwich: only for Phi-double-well potentials built from this
    // kernel with symmetric wells and certified exponents.
    const bool sandwich_applicable = !P.phi_dw_kernel_name.empty() &&
                                     P.phi_dw_kernel_name == k.name &&
                                     P.well_low == -P.well_high && k.l > 1.0 && k.m >= k.l;
    if (sandwich_applicable) {
        const double alpha = P.well_high;
        // rates per the three exponent cases
        const double lower_rate = (k.m - 1.0 >= 1.0) ? alpha / (k.m - 1.0) : alpha;
        const double upper_rate = (k.l - 1.0 <= 1.0) ? alpha : alpha / (k.l - 1.0);
        rep.checks.push_back(min_margin_check(
            "sandwich_bounds", p,
            [&](std::size_t i) {
                const double t = p.t[i];
                if (t < 0.0) return std::numeric_limits<double>::infinity();
                const double lo = alpha * std::tanh(lower_rate * t);
                const double hi = alpha * std::tanh(upper_rate * t);
                return std::min(p.q[i] - lo, hi - p.q[i]);
            },
            0, n, options.bound_slack));
    } else {
        rep.checks.push_back({"sandwich_bounds", CheckStatus::skipped, 0.0, 0.0});
    }

    try {
        const DecayFit fit = fit_decay(p);
        CheckResult r;
        r.name = "decay_fits";
        r.margin = std::min(std::min(fit.theta2, fit.theta4), std::min(fit.beta2, fit.beta4));
        r.status = (r.margin > 0.0 && fit.theta1 > 0.0 && fit.theta3 > 0.0 && fit.beta1 > 0.0 &&
                    fit.beta3 > 0.0)
                       ? CheckStatus::pass
                       : CheckStatus::fail;
        r.location = p.t.back();
        rep.checks.push_back(r);
    } catch (const fit_error&) {
        rep.checks.push_back({"decay_fits", CheckStatus::skipped, 0.0, 0.0});
    }

    if (P.even_symmetric) {
        const double mid = P.midpoint();
        const double reach = std::min(p.t.back(), -p.t.front());
        rep.checks.push_back(min_margin_check(
            "symmetry", p,
            [&](std::size_t i) {
                const double t = p.t[i];
                if (t < 0.0 || t > reach) return std::numeric_limits<double>::infinity();
                const double s = p.q[i] + interp_q(p, -t) - 2.0 * mid;
                return options.symmetry_tol - std::fabs(s);
            },
            0, n));
    } else {
        rep.checks.push_back({"symmetry", CheckStatus::skipped, 0.0, 0.0});
    }

    if (options.oracle) {
        const auto& oracle = *options.oracle;
        rep.checks.push_back(min_margin_check(
            "oracle_distance", p,
            [&](std::size_t i) { return options.oracle_tol - std::fabs(p.q[i] - oracle(p.t[i])); },
            0, n));
    } else {
        rep.checks.push_back({"oracle_distance", CheckStatus::skipped, 0.0, 0.0});
    }

    try {
        const double action = finite_action(p, k, P);
        CheckResult r;
        r.name = "finite_action";
        r.margin = action;
        r.status = (std::isfinite(action) && action >= 0.0) ? CheckStatus::pass
                                                            : CheckStatus::fail;
        rep.checks.push_back(r);
    } catch (const fit_error&) {
        rep.checks.push_back({"finite_action", CheckStatus::skipped, 0.0, 0.0});
    }

    return rep;
}

double finite_action(const HeteroclinicProfile& p, const PhiKernel& k, const Potential& P) {
    const std::size_t n = p.size();
    if (n < 3) throw fit_error("finite_action: profile too short");

    auto integrand = [&](std::size_t i) {
        return big_phi(k, std::fabs(p.q_prime[i]), 1e-13) + P.V(p.q[i]);
    };

    // Composite Simpson over the uniform samples; trapezoid fixes up ragged
    // end cells and an odd interval count.
    double total = 0.0;
    std::size_t i = 0;
    double fi = integrand(0);
    while (i + 2 < n) {
        const double h1 = p.t[i + 1] - p.t[i];
        const double h2 = p.t[i + 2] - p.t[i + 1];
        const double fm = integrand(i + 1);
        const double fr = integrand(i + 2);
        if (std::fabs(h1 - h2) < 1e-9 * h1) {
            total += (h1 / 3.0) * (fi + 4.0 * fm + fr);
            i += 2;
            fi = fr;
        } else {
            total += 0.5 * h1 * (fi + fm);
            i += 1;
            fi = fm;
        }
    }
    if (i + 1 < n) total += 0.5 * (p.t[i + 1] - p.t[i]) * (fi + integrand(i + 1));

    // Analytic tail correction from the fitted decay envelopes.
    const DecayFit fit = fit_decay(p);
    auto tail = [&](double t_edge, double amp_q, double rate_q, double amp_p, double rate_p,
                    double well) {
        if (!(rate_q > 0.0) || !(rate_p > 0.0))
            throw fit_error("finite_action: nonpositive fitted decay rate");
        const double span = 60.0 / std::min(rate_q, rate_p);
        const double h = span / 512.0;
        double s = 0.0;
        for (int j = 0; j <= 512; ++j) {
            const double t = t_edge + j * h;
            const double qd = amp_p * std::exp(-rate_p * t);
            const double dist = amp_q * std::exp(-rate_q * t);
            const double val =
                big_phi(k, qd, 1e-16) + P.V(well + (well > P.midpoint() ? -dist : dist));
            s += (j == 0 || j == 512) ? 0.5 * val : val;
        }
        return s * h;
    };
    total += tail(p.t.back(), fit.theta1, fit.theta2, fit.beta1, fit.beta2, p.wells.second);
    total += tail(-p.t.front(), fit.theta3, fit.theta4, fit.beta3, fit.beta4, p.wells.first);
    return total;
}

nlohmann::json report_to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["profile_meta"] = {{"route", report.route},
                         {"kernel", report.kernel_name},
                         {"potential", report.potential_name}};
    j["all_passed"] = report.all_passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        const char* status = c.status == CheckStatus::pass
                                 ? "pass"
                                 : (c.status == CheckStatus::fail ? "fail" : "skipped");
        j["checks"].push_back({{"name", c.name},
                               {"status", status},
                               {"margin", c.margin},
                               {"location", c.location}});
    }
    return j;
}

}  // namespace hetero
