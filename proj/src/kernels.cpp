#include "hetero/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetero/mc_truncation.hpp"
#include "hetero/quadrature.hpp"

namespace hetero {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// s*phi(s) with the s=0 limit made explicit (l > 1 forces it to 0).
auto phi_integrand(const PhiKernel& k) {
    return [&k](double s) { return s == 0.0 ? 0.0 : s * k.phi(s); };
}

auto g_integrand(const PhiKernel& k) {
    return [&k](double s) { return s == 0.0 ? 0.0 : s * k.phi_t_prime(s); };
}

}  // namespace

double big_phi(const PhiKernel& k, double t, double tol) {
    if (t < 0.0) throw evaluation_error("big_phi: t must be nonnegative");
    if (tol <= 0.0) throw evaluation_error("big_phi: tol must be positive");
    if (t == 0.0) return 0.0;
    return adaptive_simpson(phi_integrand(k), 0.0, t, tol);
}

double big_g(const PhiKernel& k, double t, double tol) {
    if (t < 0.0) throw evaluation_error("big_g: t must be nonnegative");
    if (tol <= 0.0) throw evaluation_error("big_g: tol must be positive");
    if (t == 0.0) return 0.0;
    return adaptive_simpson(g_integrand(k), 0.0, t, tol);
}

double big_g_inverse(const PhiKernel& k, double v, double tol) {
    if (v < 0.0) throw evaluation_error("big_g_inverse: v must be nonnegative");
    if (v == 0.0) return 0.0;
    const double qtol = std::max(0.05 * tol * std::min(1.0, v), 1e-300);
    const double target = 0.5 * tol * std::max(1.0, v);

    // Geometric bracket expansion from [0,1] by factor 4.
    double lo = 0.0, hi = 1.0;
    double ghi = big_g(k, hi, qtol);
    while (ghi < v) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e120)
            throw unbounded_inverse_error("big_g_inverse: bracket expansion exceeded overflow guard");
        ghi = big_g(k, hi, qtol);
    }

    // Bisection down to a narrow relative bracket.
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (big_g(k, mid, qtol) < v ? lo : hi) = mid;
    }

    // Newton with bisection fallback; G'(t) = t*(phi(t)t)' > 0.
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double r = big_g(k, t, qtol) - v;
        (r < 0.0 ? lo : hi) = t;
        if (std::fabs(r) <= target) break;
        const double dg = t * k.phi_t_prime(t);
        double tn = (dg > 0.0 && std::isfinite(dg)) ? t - r / dg : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) <= 4.0 * kEps * t) {
            t = tn;
            break;
        }
        t = tn;
    }
    return t;
}

std::pair<double, double> estimate_exponents(const PhiKernel& k,
                                             const std::vector<double>& grid) {
    if (grid.empty()) throw evaluation_error("estimate_exponents: empty grid");
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -std::numeric_limits<double>::infinity();
    for (double t : grid) {
        if (t <= 0.0) throw evaluation_error("estimate_exponents: grid must be positive");
        const double p = k.phi(t);
        if (!(p > 0.0) || !std::isfinite(p))
            throw hypothesis_error("estimate_exponents: phi(t) <= 0 at a grid point");
        const double r = k.phi_t_prime(t) / p;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    return {1.0 + rmin, 1.0 + rmax};
}

double legendre_conjugate(const PhiKernel& k, double s, double tol) {
    if (s < 0.0) throw evaluation_error("legendre_conjugate: s must be nonnegative");
    if (s == 0.0) return 0.0;
    // Maximizer solves phi(t)t = s; W(t) = phi(t)t is strictly increasing.
    auto w = [&k](double t) { return t == 0.0 ? 0.0 : k.phi(t) * t; };
    double lo = 0.0, hi = 1.0;
    while (w(hi) < s) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e120)
            throw unbounded_inverse_error("legendre_conjugate: bracket expansion exceeded overflow guard");
    }
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (w(mid) < s ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double r = w(t) - s;
        (r < 0.0 ? lo : hi) = t;
        const double dw = k.phi_t_prime(t);
        double tn = (dw > 0.0 && std::isfinite(dw)) ? t - r / dw : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) <= 4.0 * kEps * t) {
            t = tn;
            break;
        }
        t = tn;
    }
    return s * t - big_phi(k, t, tol);
}

std::vector<double> exponent_grid() {
    std::vector<double> g(2048);
    const double lo = std::log(1e-8), hi = std::log(1e8);
    for (int i = 0; i < 2048; ++i)
        g[i] = std::exp(lo + (hi - lo) * i / 2047.0);
    return g;
}

KernelCertificate certify_kernel(const PhiKernel& k) {
    KernelCertificate c;
    const auto grid = exponent_grid();
    c.phi1_ok = true;
    for (double t : grid) {
        if (!(k.phi(t) > 0.0) || !(k.phi_t_prime(t) > 0.0)) {
            c.phi1_ok = false;
            break;
        }
    }
    const auto [lo, hi] = estimate_exponents(k, grid);
    c.ratio_min = lo - 1.0;
    c.ratio_max = hi - 1.0;
    const double slack = 1e-9;
    c.phi2_ok = (k.l - 1.0 <= c.ratio_min + slack) && (c.ratio_max <= k.m - 1.0 + slack);
    return c;
}

PhiKernel make_p_power(double p) {
    if (!(p > 1.0)) throw construction_error("p-power kernel requires p > 1");
    PhiKernel k;
    k.phi = [p](double t) { return std::pow(t, p - 2.0); };
    k.phi_prime = [p](double t) { return (p - 2.0) * std::pow(t, p - 3.0); };
    k.l = p;
    k.m = p;
    k.name = "p-power(p=" + std::to_string(p) + ")";
    k.spec = {{"kind", "p-power"}, {"params", {{"p", p}}}};
    return k;
}

PhiKernel make_mixed(double p, double q) {
    if (!(p > 1.0) || !(q > p)) throw construction_error("mixed kernel requires 1 < p < q");
    PhiKernel k;
    k.phi = [p, q](double t) { return std::pow(t, p - 2.0) + std::pow(t, q - 2.0); };
    k.phi_prime = [p, q](double t) {
        return (p - 2.0) * std::pow(t, p - 3.0) + (q - 2.0) * std::pow(t, q - 3.0);
    };
    k.l = p;
    k.m = q;
    k.name = "mixed(p=" + std::to_string(p) + ",q=" + std::to_string(q) + ")";
    k.spec = {{"kind", "mixed"}, {"params", {{"p", p}, {"q", q}}}};
    return k;
}

PhiKernel make_gamma_power(double gamma) {
    if (!(gamma > 1.0)) throw construction_error("gamma-power kernel requires gamma > 1");
    PhiKernel k;
    // Phi(t) = (1+t^2)^g - 1 => phi(t) = 2g(1+t^2)^{g-1}
    k.phi = [gamma](double t) { return 2.0 * gamma * std::pow(1.0 + t * t, gamma - 1.0); };
    k.phi_prime = [gamma](double t) {
        return 4.0 * gamma * (gamma - 1.0) * t * std::pow(1.0 + t * t, gamma - 2.0);
    };
    k.l = 2.0;
    k.m = 2.0 * gamma;
    k.name = "gamma-power(gamma=" + std::to_string(gamma) + ")";
    k.spec = {{"kind", "gamma-power"}, {"params", {{"gamma", gamma}}}};
    return k;
}

PhiKernel make_plog(double p) {
    if (!(p > 1.0)) throw construction_error("plog kernel requires p > 1");
    PhiKernel k;
    // Phi(t) = t^p ln(1+t) => t*phi(t) = Phi'(t) = p t^{p-1} ln(1+t) + t^p/(1+t)
    k.phi = [p](double t) {
        return p * std::pow(t, p - 2.0) * std::log1p(t) + std::pow(t, p - 1.0) / (1.0 + t);
    };
    k.phi_prime = [p](double t) {
        const double a = p * (p - 2.0) * std::pow(t, p - 3.0) * std::log1p(t);
        const double b = p * std::pow(t, p - 2.0) / (1.0 + t);
        const double c = ((p - 1.0) * std::pow(t, p - 2.0) * (1.0 + t) - std::pow(t, p - 1.0)) /
                         ((1.0 + t) * (1.0 + t));
        return a + b + c;
    };
    k.l = p;
    k.m = p + 1.0;
    k.name = "plog(p=" + std::to_string(p) + ")";
    k.spec = {{"kind", "plog"}, {"params", {{"p", p}}}};
    return k;
}

PhiKernel make_sinh_integral(double gamma, double beta) {
    if (!(gamma >= 0.0 && gamma < 1.0) || !(beta > 0.0))
        throw construction_error("sinh-integral kernel requires gamma in [0,1) and beta > 0");
    PhiKernel k;
    // Phi(t) = int_0^t s^{1-g} (asinh s)^b ds => phi(t) = t^{-g} (asinh t)^b
    k.phi = [gamma, beta](double t) {
        return std::pow(t, -gamma) * std::pow(std::asinh(t), beta);
    };
    k.phi_prime = [gamma, beta](double t) {
        const double a = std::asinh(t);
        return -gamma * std::pow(t, -gamma - 1.0) * std::pow(a, beta) +
               std::pow(t, -gamma) * beta * std::pow(a, beta - 1.0) / std::sqrt(1.0 + t * t);
    };
    k.l = 2.0 - gamma;
    k.m = 2.0 - gamma + beta;
    k.name = "sinh-integral(gamma=" + std::to_string(gamma) + ",beta=" + std::to_string(beta) + ")";
    k.spec = {{"kind", "sinh-integral"}, {"params", {{"gamma", gamma}, {"beta", beta}}}};
    return k;
}

std::vector<PhiKernel> kernel_catalog() {
    return {make_p_power(2.0),   make_p_power(2.5), make_p_power(3.0),
            make_mixed(2.0, 4.0), make_gamma_power(2.0), make_plog(2.0),
            make_sinh_integral(0.5, 1.0)};
}

PhiKernel kernel_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    if (kind == "p-power") return make_p_power(p.at("p").get<double>());
    if (kind == "mixed") return make_mixed(p.at("p").get<double>(), p.at("q").get<double>());
    if (kind == "gamma-power") return make_gamma_power(p.at("gamma").get<double>());
    if (kind == "plog") return make_plog(p.at("p").get<double>());
    if (kind == "sinh-integral")
        return make_sinh_integral(p.at("gamma").get<double>(), p.at("beta").get<double>());
    if (kind == "mc-truncated") return make_mc_truncated(p.at("L").get<double>());
    throw construction_error("unknown kernel kind: " + kind);
}

BigPhiTable::BigPhiTable(const PhiKernel& k, double t_hi, int n_cells) : k_(k) {
    if (!(t_hi > 0.0) || n_cells < 8)
        throw construction_error("BigPhiTable: need t_hi > 0 and n_cells >= 8");
    grid_.resize(n_cells + 1);
    Phi_.resize(n_cells + 1);
    G_.resize(n_cells + 1);
    dPhi_.resize(n_cells + 1);
    dG_.resize(n_cells + 1);
    // Graded mesh t_i = t_hi*(i/n)^3 resolves the mild endpoint singularity
    // of s*phi(s) for kernels with l < 2.
    for (int i = 0; i <= n_cells; ++i) {
        const double u = static_cast<double>(i) / n_cells;
        grid_[i] = t_hi * u * u * u;
    }
    auto fphi = phi_integrand(k_);
    auto fg = g_integrand(k_);
    Phi_[0] = G_[0] = 0.0;
    dPhi_[0] = dG_[0] = 0.0;
    for (int i = 1; i <= n_cells; ++i) {
        Phi_[i] = Phi_[i - 1] + gauss5(fphi, grid_[i - 1], grid_[i]);
        G_[i] = G_[i - 1] + gauss5(fg, grid_[i - 1], grid_[i]);
        dPhi_[i] = fphi(grid_[i]);
        dG_[i] = fg(grid_[i]);
    }
}

double BigPhiTable::eval(const std::vector<double>& vals, bool g_slope, double t) const {
    const int n = static_cast<int>(grid_.size()) - 1;
    const double t_top = grid_.back();
    int i = static_cast<int>(std::cbrt(t / t_top) * n);
    i = std::clamp(i, 0, n - 1);
    while (i > 0 && t < grid_[i]) --i;
    while (i < n - 1 && t > grid_[i + 1]) ++i;
    const double t0 = grid_[i], t1 = grid_[i + 1];
    const double h = t1 - t0;
    const double u = (t - t0) / h;
    const auto& d = g_slope ? dG_ : dPhi_;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * vals[i] + (u3 - 2 * u2 + u) * h * d[i] +
           (-2 * u3 + 3 * u2) * vals[i + 1] + (u3 - u2) * h * d[i + 1];
}

double BigPhiTable::phi_value(double t) const {
    t = std::fabs(t);
    if (t == 0.0) return 0.0;
    if (t > grid_.back()) return big_phi(k_, t);
    return eval(Phi_, false, t);
}

double BigPhiTable::g_value(double t) const {
    if (t < 0.0) throw evaluation_error("BigPhiTable::g_value: t must be nonnegative");
    if (t == 0.0) return 0.0;
    if (t > grid_.back()) return big_g(k_, t);
    return eval(G_, true, t);
}

double BigPhiTable::g_inverse(double v) const {
    if (v < 0.0) throw evaluation_error("BigPhiTable::g_inverse: v must be nonnegative");
    if (v == 0.0) return 0.0;
    if (v > G_.back()) return big_g_inverse(k_, v);
    auto it = std::upper_bound(G_.begin(), G_.end(), v);
    const int i = std::clamp(static_cast<int>(it - G_.begin()) - 1, 0,
                             static_cast<int>(G_.size()) - 2);
    double lo = grid_[i], hi = grid_[i + 1];
    const double gl = G_[i], gh = G_[i + 1];
    double t = lo + (hi - lo) * (v - gl) / std::max(gh - gl, 1e-300);
    t = std::clamp(t, lo, hi);
    for (int iter = 0; iter < 30; ++iter) {
        const double r = g_value(t) - v;
        (r < 0.0 ? lo : hi) = t;
        const double dg = t * k_.phi_t_prime(t);
        double tn = (dg > 0.0 && std::isfinite(dg)) ? t - r / dg : 0.5 * (lo + hi);
        if (!(tn >= lo && tn <= hi)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) <= 2.0 * kEps * std::max(tn, 1e-300)) {
            t = tn;
            break;
        }
        t = tn;
    }
    return t;
}

}  // namespace hetero
