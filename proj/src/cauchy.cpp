#include "hetero/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetero {

namespace {

// Dormand-Prince 4(5) coefficients.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct Rhs {
    const PhiKernel& k;
    const Potential& P;
    BigPhiTable gtbl;
    double sign;  // +1 forward, -1 for the reflected (backward) problem

    double operator()(double y) const {
        const double v = std::max(P.V(y), 0.0);
        return sign * gtbl.g_inverse(v);
    }
};

// Integrates y' = f(y) from (t0, y0) to t1 with adaptive steps; returns y(t1)
// or stops early when `done(y)` fires (returning the first state past it).
template <class F, class Done, class OnStep>
bool integrate_segment(const F& f, double& t, double& y, double t1, double rel_tol,
                       double abs_tol, long& steps_left, double& h, Done done,
                       OnStep on_step) {
    while (t < t1) {
        if (steps_left-- <= 0) throw solver_error("solve_cauchy: step cap exceeded");
        h = std::min(h, t1 - t);
        if (h < 1e-14 * std::max(1.0, std::fabs(t)))
            throw solver_error("solve_cauchy: step underflow before reaching the tail");
        const double k1 = f(y);
        const double k2 = f(y + h * a21 * k1);
        const double k3 = f(y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(ynew);
        const double err =
            std::fabs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double tol = abs_tol + rel_tol * std::max(std::fabs(y), std::fabs(ynew));
        if (err <= tol) {
            t += h;
            y = ynew;
            on_step(t, y);
            if (done(y)) return true;
        }
        const double scale = (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        h *= std::clamp(scale, 0.2, 5.0);
    }
    return false;
}

}  // namespace

HeteroclinicProfile solve_cauchy(const PhiKernel& k, const Potential& P, double anchor,
                                 const SolverConfig& cfg) {
    const double gap = P.well_gap();
    if (!(anchor > P.well_low && anchor < P.well_high))
        throw solver_error("solve_cauchy: anchor must lie strictly between the wells");
    const double tail_eps = cfg.tail_epsilon > 0.0 ? cfg.tail_epsilon : 1e-12 * gap;
    const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 40.0 / gap;
    if (!(tail_eps < 0.1 * gap)) throw solver_error("solve_cauchy: tail_epsilon too large");

    // G inverse table sized by the potential ceiling between the wells.
    double v_max = 0.0;
    for (int i = 0; i <= 2000; ++i)
        v_max = std::max(v_max, P.V(P.well_low + gap * i / 2000.0));
    if (!(v_max > 0.0)) throw solver_error("solve_cauchy: potential vanishes between the wells");
    const double t_hi = 1.1 * big_g_inverse(k, 1.5 * v_max);
    Rhs fwd{k, P, BigPhiTable(k, t_hi), +1.0};

    if (!(fwd(anchor) > 0.0))
        throw solver_error("solve_cauchy: stationary start (anchor at a zero of V)");

    const double step = cfg.sample_step;
    long steps_left = cfg.max_steps;

    auto run_side = [&](double sign, double target_well, std::vector<double>& ts,
                        std::vector<double>& qs, std::vector<double>& t_raw,
                        std::vector<double>& q_raw) {
        Rhs f{k, P, fwd.gtbl, sign};
        auto done = [&](double y) {
            return sign > 0.0 ? y >= target_well - tail_eps : y <= target_well + tail_eps;
        };
        double t = 0.0, y = anchor, h = 0.1 * step;
        ts.push_back(0.0);
        qs.push_back(anchor);
        t_raw.push_back(0.0);
        q_raw.push_back(anchor);
        auto on_step = [&](double tr, double yr) {
            t_raw.push_back(tr);
            q_raw.push_back(yr);
        };
        // March grid point to grid point so samples carry no dense-output error.
        for (long j = 1; t < t_max; ++j) {
            const double t1 = std::min(j * step, t_max);
            const bool hit =
                integrate_segment(f, t, y, t1, cfg.rel_tol, cfg.abs_tol, steps_left, h, done,
                                  on_step);
            if (t == t1 || hit) {
                ts.push_back(t);
                qs.push_back(y);
            }
            if (hit || done(y)) break;
        }
    };

    std::vector<double> tf, qf, tb, qb, tf_raw, qf_raw, tb_raw, qb_raw;
    run_side(+1.0, P.well_high, tf, qf, tf_raw, qf_raw);
    run_side(-1.0, P.well_low, tb, qb, tb_raw, qb_raw);

    HeteroclinicProfile prof;
    prof.route = Route::cauchy;
    prof.wells = {P.well_low, P.well_high};
    prof.kernel_name = k.name;
    prof.potential_name = P.name;
    prof.normalization_shift = 0.0;

    // Backward side is the reflected problem: sample at -t, reversed.
    prof.t.reserve(tb.size() + tf.size() - 1);
    prof.q.reserve(prof.t.capacity());
    for (std::size_t i = tb.size(); i-- > 1;) {
        prof.t.push_back(-tb[i]);
        prof.q.push_back(qb[i]);
    }
    prof.t.insert(prof.t.end(), tf.begin(), tf.end());
    prof.q.insert(prof.q.end(), qf.begin(), qf.end());
    for (std::size_t i = tb_raw.size(); i-- > 1;) {
        prof.t_raw.push_back(-tb_raw[i]);
        prof.q_raw.push_back(qb_raw[i]);
    }
    prof.t_raw.insert(prof.t_raw.end(), tf_raw.begin(), tf_raw.end());
    prof.q_raw.insert(prof.q_raw.end(), qf_raw.begin(), qf_raw.end());

    // q' from the energy identity; residual against direct quadrature.
    prof.q_prime.resize(prof.size());
    prof.energy_residual.resize(prof.size());
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const double v = std::max(P.V(prof.q[i]), 0.0);
        prof.q_prime[i] = fwd.gtbl.g_inverse(v);
        prof.energy_residual[i] = big_g(k, prof.q_prime[i], 1e-13) - v;
    }
    return prof;
}

namespace {

// Locates the uniform cell containing s; profiles may have ragged final
// spacing where the stop fired, so fall back to binary search.
std::size_t locate(const std::vector<double>& t, double s) {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t i = (it == t.begin()) ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
}

}  // namespace

double interp_q(const HeteroclinicProfile& p, double s) {
    if (p.size() < 2) throw evaluation_error("interp_q: profile too short");
    if (s <= p.t.front()) return p.q.front();
    if (s >= p.t.back()) return p.q.back();
    const std::size_t i = locate(p.t, s);
    const double h = p.t[i + 1] - p.t[i];
    const double u = (s - p.t[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p.q[i] + (u3 - 2 * u2 + u) * h * p.q_prime[i] +
           (-2 * u3 + 3 * u2) * p.q[i + 1] + (u3 - u2) * h * p.q_prime[i + 1];
}

double interp_q_prime(const HeteroclinicProfile& p, double s) {
    if (p.size() < 2) throw evaluation_error("interp_q_prime: profile too short");
    if (s <= p.t.front()) return p.q_prime.front();
    if (s >= p.t.back()) return p.q_prime.back();
    const std::size_t i = locate(p.t, s);
    const double h = p.t[i + 1] - p.t[i];
    const double u = (s - p.t[i]) / h;
    const double u2 = u * u;
    return ((6 * u2 - 6 * u) * p.q[i] + (3 * u2 - 4 * u + 1) * h * p.q_prime[i] +
            (-6 * u2 + 6 * u) * p.q[i + 1] + (3 * u2 - 2 * u) * h * p.q_prime[i + 1]) /
           h;
}

namespace {

struct LineFit {
    double slope = 0.0, intercept = 0.0;
};

LineFit lsq(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw fit_error("fit_decay: degenerate abscissae");
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

// Exponential fit of `val` against |t| over the outer window; returns
// (amplitude, rate) of val ~ amplitude * exp(-rate * |t|).
std::pair<double, double> tail_fit(const std::vector<double>& t, const std::vector<double>& val,
                                   double floor_val) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (val[i] <= 0.0) throw fit_error("fit_decay: nonpositive tail value");
        if (val[i] < floor_val) continue;  // indistinguishable from the stopping tolerance
        xs.push_back(std::fabs(t[i]));
        ys.push_back(std::log(val[i]));
    }
    if (xs.size() < 8) throw fit_error("fit_decay: too few usable tail samples");
    const LineFit f = lsq(xs, ys);
    return {std::exp(f.intercept), -f.slope};
}

}  // namespace

DecayFit fit_decay(const HeteroclinicProfile& profile, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 0.5))
        throw fit_error("fit_decay: tail_fraction must be in (0, 0.5)");
    const double gap = profile.wells.second - profile.wells.first;
    const double t_lo = profile.t.front(), t_hi = profile.t.back();
    const double floor_val = 100.0 * 1e-12 * gap;

    std::vector<double> tr, dr, pr, tl, dl, pl;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double t = profile.t[i];
        if (t >= (1.0 - tail_fraction) * t_hi && t > 0.0) {
            tr.push_back(t);
            dr.push_back(profile.wells.second - profile.q[i]);
            pr.push_back(profile.q_prime[i]);
        }
        if (t <= (1.0 - tail_fraction) * t_lo && t < 0.0) {
            tl.push_back(t);
            dl.push_back(profile.q[i] - profile.wells.first);
            pl.push_back(profile.q_prime[i]);
        }
    }
    if (tr.empty() || tl.empty()) throw fit_error("fit_decay: profile does not span both tails");

    DecayFit fit;
    std::tie(fit.theta1, fit.theta2) = tail_fit(tr, dr, floor_val);
    std::tie(fit.theta3, fit.theta4) = tail_fit(tl, dl, floor_val);
    std::tie(fit.beta1, fit.beta2) = tail_fit(tr, pr, floor_val);
    std::tie(fit.beta3, fit.beta4) = tail_fit(tl, pl, floor_val);
    return fit;
}

std::function<double(double)> closed_form_oracle(OracleKind kind, const OracleParams& params) {
    switch (kind) {
        case OracleKind::p_tanh: {
            if (!(params.p > 1.0)) throw construction_error("p_tanh oracle: p must exceed 1");
            const double alpha = params.alpha;
            const double rate = alpha / std::pow(params.p - 1.0, 1.0 / params.p);
            return [alpha, rate](double t) { return alpha * std::tanh(rate * t); };
        }
        case OracleKind::asym_logistic: {
            if (!(params.p > 1.0) || !(params.b > params.a))
                throw construction_error("asym_logistic oracle: bad parameters");
            const double a = params.a, b = params.b;
            const double rate = (b - a) / std::pow(params.p - 1.0, 1.0 / params.p);
            return [a, b, rate](double t) {
                // (a + b e^{rt}) / (1 + e^{rt}), written overflow-safe
                if (t >= 0.0) {
                    const double e = std::exp(-rate * t);
                    return (a * e + b) / (1.0 + e);
                }
                const double e = std::exp(rate * t);
                return (a + b * e) / (1.0 + e);
            };
        }
        case OracleKind::quartic_classic: {
            const double alpha = params.alpha;
            const double rate = std::sqrt(2.0) * alpha;
            return [alpha, rate](double t) { return alpha * std::tanh(rate * t); };
        }
    }
    throw construction_error("closed_form_oracle: unsupported kind");
}

}  // namespace hetero
