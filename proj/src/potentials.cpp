#include "hetero/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hetero/quadrature.hpp"

namespace hetero {

namespace {

// Largest symmetric radius around both wells on which second differences of
// V stay positive; step 1e-3 * (well gap).
double convexity_radius(const Potential& P) {
    const double gap = P.well_gap();
    const double d = 1e-3 * gap;
    const int n_max = 450;  // cap at 0.45 * gap
    int n = 0;
    for (; n < n_max; ++n) {
        const double r = (n + 1) * d;
        bool convex = true;
        for (double well : {P.well_low, P.well_high}) {
            for (double x : {well - r, well + r}) {
                if (P.V(x - d) - 2.0 * P.V(x) + P.V(x + d) <= 0.0) {
                    convex = false;
                    break;
                }
            }
            if (!convex) break;
        }
        if (!convex) break;
    }
    return n * d;
}

// sign(w)*phi(|w|)*|w| with the w=0 limit made explicit.
double phi_w(const PhiKernel& k, double w) {
    if (w == 0.0) return 0.0;
    return (w > 0.0 ? 1.0 : -1.0) * k.phi(std::fabs(w)) * std::fabs(w);
}

double sgn_pow(double w, double e) {
    if (w == 0.0) return 0.0;
    return (w > 0.0 ? 1.0 : -1.0) * std::pow(std::fabs(w), e);
}

}  // namespace

Potential phi_double_well(const PhiKernel& k, double alpha) {
    if (!(alpha > 0.0)) throw construction_error("phi_double_well: alpha must be positive");
    // Table covers |t^2 - alpha^2| for t in roughly [-2.2 alpha, 2.2 alpha];
    // the slow quadrature fallback handles anything beyond.
    auto tbl = std::make_shared<BigPhiTable>(k, 4.0 * alpha * alpha);
    auto kcopy = std::make_shared<PhiKernel>(k);
    Potential P;
    P.V = [tbl, alpha](double t) { return tbl->phi_value(t * t - alpha * alpha); };
    P.V_prime = [kcopy, alpha](double t) {
        return 2.0 * t * phi_w(*kcopy, t * t - alpha * alpha);
    };
    P.well_low = -alpha;
    P.well_high = alpha;
    P.name = "phi-dw(" + k.name + ",alpha=" + std::to_string(alpha) + ")";
    P.spec = {{"kind", "phi-dw"}, {"params", {{"alpha", alpha}}}};
    P.even_symmetric = true;
    P.phi_dw_kernel_name = k.name;
    P.rho = convexity_radius(P);
    return P;
}

Potential p_double_well(double p, double alpha) {
    if (!(p > 1.0) || !(alpha > 0.0))
        throw construction_error("p_double_well: need p > 1 and alpha > 0");
    Potential P;
    P.V = [p, alpha](double t) {
        return std::pow(std::fabs(t * t - alpha * alpha), p) / p;
    };
    P.V_prime = [p, alpha](double t) {
        return 2.0 * t * sgn_pow(t * t - alpha * alpha, p - 1.0);
    };
    P.well_low = -alpha;
    P.well_high = alpha;
    P.name = "p-dw(p=" + std::to_string(p) + ",alpha=" + std::to_string(alpha) + ")";
    P.spec = {{"kind", "p-dw"}, {"params", {{"p", p}, {"alpha", alpha}}}};
    P.even_symmetric = true;
    P.phi_dw_kernel_name = make_p_power(p).name;
    P.rho = convexity_radius(P);
    return P;
}

Potential quartic_well(double alpha) {
    if (!(alpha > 0.0)) throw construction_error("quartic_well: alpha must be positive");
    Potential P;
    P.V = [alpha](double t) {
        const double w = t * t - alpha * alpha;
        return w * w;
    };
    P.V_prime = [alpha](double t) { return 4.0 * t * (t * t - alpha * alpha); };
    P.well_low = -alpha;
    P.well_high = alpha;
    P.name = "quartic(alpha=" + std::to_string(alpha) + ")";
    P.spec = {{"kind", "quartic"}, {"params", {{"alpha", alpha}}}};
    P.even_symmetric = true;
    P.rho = convexity_radius(P);
    return P;
}

Potential asymmetric_well(double p, double a, double b) {
    if (!(p > 1.0) || !(b > a))
        throw construction_error("asymmetric_well: need p > 1 and b > a");
    Potential P;
    P.V = [p, a, b](double t) {
        return std::pow(std::fabs((t - a) * (t - b)), p) / p;
    };
    P.V_prime = [p, a, b](double t) {
        return (2.0 * t - a - b) * sgn_pow((t - a) * (t - b), p - 1.0);
    };
    P.well_low = a;
    P.well_high = b;
    P.name = "asym(p=" + std::to_string(p) + ",a=" + std::to_string(a) +
             ",b=" + std::to_string(b) + ")";
    P.spec = {{"kind", "asym"}, {"params", {{"p", p}, {"a", a}, {"b", b}}}};
    P.even_symmetric = true;  // mirror symmetry about the midpoint
    P.phi_dw_kernel_name = "";
    P.rho = convexity_radius(P);
    return P;
}

Potential raw_potential(std::function<double(double)> V, std::function<double(double)> Vp,
                        double well_low, double well_high, const std::string& name) {
    if (!(well_high > well_low)) throw construction_error("raw_potential: wells out of order");
    Potential P;
    P.V = std::move(V);
    P.V_prime = std::move(Vp);
    P.well_low = well_low;
    P.well_high = well_high;
    P.name = name;
    P.spec = {{"kind", "raw"}, {"params", nlohmann::json::object()}};
    P.even_symmetric = false;
    P.rho = convexity_radius(P);
    return P;
}

PotentialCertificate certify_hypotheses(const Potential& P, const PhiKernel& k,
                                        int grid_points) {
    PotentialCertificate cert;
    const double lo = P.well_low, hi = P.well_high;
    const double gap = hi - lo;
    const double mid = 0.5 * (lo + hi);

    double v_max = 0.0;
    cert.v1_ok = true;
    cert.v2_ok = true;
    for (int i = 0; i < grid_points; ++i) {
        const double t = lo + gap * i / (grid_points - 1.0);
        const double v = P.V(t);
        v_max = std::max(v_max, v);
        if (v < 0.0) cert.v1_ok = false;
        if (i > 0 && i < grid_points - 1 && !(v > 0.0)) cert.v2_ok = false;
        cert.sup_V_prime = std::max(cert.sup_V_prime, std::fabs(P.V_prime(t)));
    }
    const double zero_tol = 1e-14 * std::max(1.0, v_max);
    if (std::fabs(P.V(lo)) > zero_tol || std::fabs(P.V(hi)) > zero_tol) cert.v2_ok = false;

    cert.rho = convexity_radius(P);
    cert.v5_ok = cert.rho > 0.0;

    // (V3): sampled extrema of V / Phi(|t - well|) on a one-sided band.
    const double delta = 0.2 * gap;
    auto band_ratio = [&](double well, int side, double& rmin, double& rmax) {
        rmin = std::numeric_limits<double>::infinity();
        rmax = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double d = delta * i / 200.0;
            const double t = well + side * d;
            const double phi_val = big_phi(k, d, 1e-12);
            if (!(phi_val > 0.0)) continue;
            const double r = P.V(t) / phi_val;
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
    };
    band_ratio(hi, -1, cert.a1, cert.a2);
    band_ratio(lo, +1, cert.a3, cert.a4);
    cert.v3_ok = cert.a1 > 0.0 && std::isfinite(cert.a2) && cert.a3 > 0.0 &&
                 std::isfinite(cert.a4);

    // (V4) with unit inner scalings: ratios of -V'(t) to (t-mid)*phi(|t-well|)|t-well|.
    auto slope_ratio = [&](double well, double from, double to, double& rmin, double& rmax) {
        rmin = std::numeric_limits<double>::infinity();
        rmax = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double t = from + (to - from) * i / 200.0;
            const double d = std::fabs(t - well);
            const double denom = (t - mid) * k.phi(d) * d;
            if (denom == 0.0 || !std::isfinite(denom)) continue;
            const double r = -P.V_prime(t) / denom;
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
    };
    const double inset = 0.02 * gap;
    slope_ratio(hi, mid + inset, hi - inset, cert.c1, cert.c3);
    slope_ratio(lo, lo + inset, mid - inset, cert.c5, cert.c7);
    cert.v4_ok = cert.c1 > 0.0 && std::isfinite(cert.c3) && cert.c5 > 0.0 &&
                 std::isfinite(cert.c7);
    return cert;
}

Potential potential_from_json(const nlohmann::json& j, const PhiKernel& k) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    if (kind == "phi-dw") return phi_double_well(k, p.at("alpha").get<double>());
    if (kind == "p-dw") return p_double_well(p.at("p").get<double>(), p.at("alpha").get<double>());
    if (kind == "quartic") return quartic_well(p.at("alpha").get<double>());
    if (kind == "asym")
        return asymmetric_well(p.at("p").get<double>(), p.at("a").get<double>(),
                               p.at("b").get<double>());
    throw construction_error("unknown potential kind: " + kind);
}

}  // namespace hetero
