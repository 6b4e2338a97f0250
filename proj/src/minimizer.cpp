#include "hetero/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetero {

namespace {

double phi_flux(const PhiKernel& k, double d) {
    if (d == 0.0) return 0.0;
    return (d > 0.0 ? 1.0 : -1.0) * k.phi(std::fabs(d)) * std::fabs(d);
}

// Deterministic chunked sum: fixed chunk count, ordered combine, so the
// result does not depend on the thread count.
constexpr int kChunks = 64;

template <class Body>
double chunked_sum(long n, Body body) {
    double partial[kChunks] = {0.0};
#pragma omp parallel for schedule(static)
    for (int c = 0; c < kChunks; ++c) {
        const long lo = n * c / kChunks;
        const long hi = n * (c + 1) / kChunks;
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += body(i);
        partial[c] = s;
    }
    double total = 0.0;
    for (int c = 0; c < kChunks; ++c) total += partial[c];
    return total;
}

double node_value(const DiscreteAction& D, const std::vector<double>& u, long i) {
    // i in [0, N+1]: 0 and N+1 are the clamped endpoints.
    if (i == 0) return D.boundary.first;
    if (i == static_cast<long>(u.size()) + 1) return D.boundary.second;
    return u[i - 1];
}

// Shared cell term: h * [Phi(|du/h|) + (V(u_i)+V(u_{i+1}))/2].
template <class PhiFn>
double cell_term(const DiscreteAction& D, const Potential& P, const PhiFn& Phi,
                 const std::vector<double>& u, long i, double h) {
    const double ul = node_value(D, u, i);
    const double ur = node_value(D, u, i + 1);
    return h * (Phi((ur - ul) / h) + 0.5 * (P.V(ul) + P.V(ur)));
}

}  // namespace

std::vector<double> initial_ramp(const DiscreteAction& D, const Potential& P) {
    std::vector<double> u(D.N);
    const double mid = P.midpoint();
    for (int j = 0; j < D.N; ++j)
        u[j] = std::clamp(mid + D.node_time(j), P.well_low, P.well_high);
    return u;
}

double action_value_serial(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                           const std::vector<double>& u) {
    const double h = D.h();
    auto Phi = [&](double d) { return big_phi(k, std::fabs(d), 1e-13); };
    double total = 0.0;
    for (long i = 0; i <= D.N; ++i) total += cell_term(D, P, Phi, u, i, h);
    return total;
}

double action_value(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                    const std::vector<double>& u) {
    const double h = D.h();
    double dmax = 1.0;
    for (long i = 0; i <= D.N; ++i)
        dmax = std::max(dmax, std::fabs(node_value(D, u, i + 1) - node_value(D, u, i)) / h);
    BigPhiTable tbl(k, 2.0 * dmax);
    auto Phi = [&](double d) { return tbl.phi_value(d); };
    return chunked_sum(D.N + 1, [&](long i) { return cell_term(D, P, Phi, u, i, h); });
}

void action_gradient_serial(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                            const std::vector<double>& u, std::vector<double>& grad) {
    const double h = D.h();
    grad.resize(D.N);
    for (long j = 1; j <= D.N; ++j) {
        const double dl = (node_value(D, u, j) - node_value(D, u, j - 1)) / h;
        const double dr = (node_value(D, u, j + 1) - node_value(D, u, j)) / h;
        grad[j - 1] = phi_flux(k, dl) - phi_flux(k, dr) + h * P.V_prime(u[j - 1]);
    }
}

void action_gradient(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                     const std::vector<double>& u, std::vector<double>& grad) {
    const double h = D.h();
    grad.resize(D.N);
#pragma omp parallel for schedule(static)
    for (long j = 1; j <= D.N; ++j) {
        const double dl = (node_value(D, u, j) - node_value(D, u, j - 1)) / h;
        const double dr = (node_value(D, u, j + 1) - node_value(D, u, j)) / h;
        grad[j - 1] = phi_flux(k, dl) - phi_flux(k, dr) + h * P.V_prime(u[j - 1]);
    }
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return chunked_sum(static_cast<long>(a.size()), [&](long i) { return a[i] * b[i]; });
}

double sup_norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::fabs(x));
    return s;
}

// Table-backed action evaluator reused across line-search probes; regrows
// its slope range when a trial step exceeds it.
class ActionEval {
  public:
    ActionEval(const DiscreteAction& D, const PhiKernel& k, const Potential& P)
        : D_(D), k_(k), P_(P), range_(4.0), tbl_(k, range_) {}

    double value(const std::vector<double>& u) {
        const double h = D_.h();
        double dmax = 0.0;
        for (long i = 0; i <= D_.N; ++i)
            dmax = std::max(dmax,
                            std::fabs(node_value(D_, u, i + 1) - node_value(D_, u, i)) / h);
        if (dmax > range_) {
            range_ = 2.0 * dmax;
            tbl_ = BigPhiTable(k_, range_);
        }
        auto Phi = [&](double d) { return tbl_.phi_value(d); };
        return chunked_sum(D_.N + 1, [&](long i) { return cell_term(D_, P_, Phi, u, i, h); });
    }

  private:
    const DiscreteAction& D_;
    const PhiKernel& k_;
    const Potential& P_;
    double range_;
    BigPhiTable tbl_;
};

}  // namespace

namespace {

// flux'(d) = (phi(t)t)' at t = |d|; clamped because singular kernels
// (l < 2) blow up at zero slope and degenerate ones vanish there.
double flux_derivative(const PhiKernel& k, double d) {
    const double t = std::max(std::fabs(d), 1e-12);
    const double fp = k.phi_t_prime(t);
    if (!std::isfinite(fp)) return 1e12;
    return std::clamp(fp, 0.0, 1e12);
}

// Solves (tridiagonal + mu I) x = -g in place; standard Thomas elimination.
bool thomas_solve(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                  const std::vector<double>& g, double mu, std::vector<double>& x) {
    const std::size_t n = diag.size();
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] += mu;
        x[i] = -g[i];
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0 || !std::isfinite(diag[i - 1])) return false;
        const double w = sub[i - 1] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        x[i] -= w * x[i - 1];
    }
    if (diag[n - 1] == 0.0 || !std::isfinite(diag[n - 1])) return false;
    x[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - sup[i] * x[i + 1]) / diag[i];
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

// Damped Newton on grad F = 0. The Jacobian is tridiagonal; it is made
// positive definite by a Levenberg shift when the double-well midsection
// (V'' < 0) breaks diagonal dominance. Armijo on the action value keeps the
// iteration monotone, so this is still descent, just with a better direction.
MinimizeResult minimize_action_newton(const DiscreteAction& D, const PhiKernel& k,
                                      const Potential& P, const std::vector<double>& u0,
                                      const MinimizeOptions& opts) {
    const double h = D.h();
    ActionEval eval(D, k, P);
    MinimizeResult res;
    res.u = u0;
    std::vector<double> g, dir, trial(D.N), sub(D.N - 1), diag(D.N), sup(D.N - 1);
    action_gradient(D, k, P, res.u, g);
    double f = eval.value(res.u);

    for (long it = 0; it < opts.max_iters; ++it) {
        res.grad_norm = sup_norm(g);
        if (res.grad_norm <= opts.gtol) {
            res.converged = true;
            break;
        }

        for (long j = 0; j < D.N; ++j) {
            const double dl = (node_value(D, res.u, j + 1) - node_value(D, res.u, j)) / h;
            const double dr = (node_value(D, res.u, j + 2) - node_value(D, res.u, j + 1)) / h;
            const double fl = flux_derivative(k, dl), fr = flux_derivative(k, dr);
            const double e = 1e-6 * std::max(1.0, std::fabs(res.u[j]));
            const double vpp = (P.V_prime(res.u[j] + e) - P.V_prime(res.u[j] - e)) / (2.0 * e);
            diag[j] = (fl + fr) / h + h * vpp;
            if (j > 0) sub[j - 1] = -fl / h;
            if (j + 1 < D.N) sup[j] = -fr / h;
        }

        // Levenberg ladder: raise the shift until the solve yields a usable
        // descent direction.
        double mu = 0.0;
        bool have_dir = false;
        for (int attempt = 0; attempt < 12 && !have_dir; ++attempt) {
            if (thomas_solve(sub, diag, sup, g, mu, dir) && dot(g, dir) < 0.0)
                have_dir = true;
            else
                mu = (mu == 0.0) ? 1e-8 : mu * 100.0;
        }
        if (!have_dir) {
            dir = g;
            for (double& x : dir) x = -x;
        }

        const double slope = dot(g, dir);
        double s = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (long i = 0; i < D.N; ++i) trial[i] = res.u[i] + s * dir[i];
            const double ft = eval.value(trial);
            if (ft <= f + 1e-4 * s * slope) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            if (res.grad_norm <= std::max(1e3 * opts.gtol, 1e-12)) {
                res.converged = true;
                break;
            }
            throw descent_error("minimize_action: line search failed at gradient sup-norm " +
                                std::to_string(res.grad_norm));
        }
        res.u.swap(trial);
        f = eval.value(res.u);
        action_gradient(D, k, P, res.u, g);
        ++res.iterations;
    }
    res.grad_norm = sup_norm(g);
    res.action = f;
    return res;
}

}  // namespace

MinimizeResult minimize_action(const DiscreteAction& D, const PhiKernel& k, const Potential& P,
                               const std::vector<double>& u0, const MinimizeOptions& opts) {
    if (static_cast<int>(u0.size()) != D.N)
        throw construction_error("minimize_action: u0 size does not match N");
    for (double x : u0)
        if (!std::isfinite(x)) throw construction_error("minimize_action: non-finite u0");

    if (opts.use_newton) return minimize_action_newton(D, k, P, u0, opts);

    ActionEval eval(D, k, P);
    MinimizeResult res;
    res.u = u0;
    std::vector<double> g, g_prev, dir, trial(D.N);
    action_gradient(D, k, P, res.u, g);
    double f = eval.value(res.u);
    double step = D.h();
    double gg = dot(g, g);

    for (long it = 0; it < opts.max_iters; ++it) {
        res.grad_norm = sup_norm(g);
        if (res.grad_norm <= opts.gtol) {
            res.converged = true;
            break;
        }
        if (opts.use_cg && it > 0) {
            // Polak-Ribiere with automatic restart.
            double gg_new = dot(g, g);
            double beta = (gg_new - dot(g, g_prev)) / gg;
            gg = gg_new;
            if (!(beta > 0.0)) beta = 0.0;
            for (long i = 0; i < D.N; ++i) dir[i] = -g[i] + beta * dir[i];
            if (dot(g, dir) >= 0.0)
                for (long i = 0; i < D.N; ++i) dir[i] = -g[i];
        } else {
            dir = g;
            for (double& x : dir) x = -x;
            gg = dot(g, g);
        }

        const double slope = dot(g, dir);
        // Armijo backtracking from a mildly optimistic start.
        double s = std::min(step * 4.0, 1e6);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (long i = 0; i < D.N; ++i) trial[i] = res.u[i] + s * dir[i];
            const double ft = eval.value(trial);
            if (ft <= f + 1e-4 * s * slope) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            // Flat to rounding precision: treat as converged if the gradient is
            // already small, otherwise report the stall.
            if (res.grad_norm <= std::max(1e3 * opts.gtol, 1e-12)) {
                res.converged = true;
                break;
            }
            throw descent_error("minimize_action: line search failed at gradient sup-norm " +
                                std::to_string(res.grad_norm));
        }
        res.u.swap(trial);
        f = eval.value(res.u);
        step = s;
        g_prev = g;
        action_gradient(D, k, P, res.u, g);
        ++res.iterations;
    }
    res.grad_norm = sup_norm(g);
    res.action = f;
    return res;
}

double normalize_translation(std::vector<double>& times, const std::vector<double>& values,
                             double anchor) {
    if (times.size() != values.size() || times.size() < 2)
        throw fit_error("normalize_translation: bad arrays");
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double a = values[i] - anchor, b = values[i + 1] - anchor;
        if (a == 0.0 || (a < 0.0 && b >= 0.0)) {
            const double frac = (a == 0.0 || b == a) ? 0.0 : -a / (b - a);
            const double t_star = times[i] + frac * (times[i + 1] - times[i]);
            for (double& t : times) t -= t_star;
            return -t_star;
        }
    }
    throw fit_error("normalize_translation: values never cross the anchor");
}

HeteroclinicProfile variational_profile(const DiscreteAction& D, const PhiKernel& k,
                                        const Potential& P, const MinimizeResult& res,
                                        double anchor) {
    const double h = D.h();
    HeteroclinicProfile prof;
    prof.route = Route::variational;
    prof.wells = {P.well_low, P.well_high};
    prof.kernel_name = k.name;
    prof.potential_name = P.name;
    prof.t.resize(D.N);
    prof.q = res.u;
    prof.q_prime.resize(D.N);
    prof.energy_residual.resize(D.N);
    for (int j = 0; j < D.N; ++j) prof.t[j] = D.node_time(j);
    for (int j = 0; j < D.N; ++j) {
        const double ul = (j == 0) ? D.boundary.first : res.u[j - 1];
        const double ur = (j == D.N - 1) ? D.boundary.second : res.u[j + 1];
        prof.q_prime[j] = (ur - ul) / (2.0 * h);
        prof.energy_residual[j] =
            big_g(k, std::fabs(prof.q_prime[j]), 1e-12) - P.V(res.u[j]);
    }
    prof.normalization_shift = normalize_translation(prof.t, prof.q, anchor);
    return prof;
}

}  // namespace hetero
