#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetero/cauchy.hpp"

using namespace hetero;

namespace {

double sup_oracle_error(const HeteroclinicProfile& p, const std::function<double(double)>& f,
                        double window) {
    double sup = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::fabs(p.t[i]) > window) continue;
        sup = std::max(sup, std::fabs(p.q[i] - f(p.t[i])));
    }
    return sup;
}

}  // namespace

TEST_CASE("tanh profile for the classic p=2 double well") {
    const PhiKernel k = make_p_power(2.0);
    const Potential P = p_double_well(2.0, 1.0);
    const auto prof = solve_cauchy(k, P, 0.0);
    const auto oracle = closed_form_oracle(OracleKind::p_tanh, {.p = 2.0, .alpha = 1.0});
    CHECK(sup_oracle_error(prof, oracle, 8.0) <= 1e-8);
    // spot value q(1) = tanh(1)
    CHECK(interp_q(prof, 1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-10));
    CHECK(prof.route == Route::cauchy);
    CHECK(prof.wells.first == -1.0);
    CHECK(prof.wells.second == 1.0);
}

TEST_CASE("tanh family across p and alpha") {
    struct Case {
        double p, alpha;
    };
    for (const Case c : {Case{1.5, 1.0}, Case{3.0, 1.0}, Case{2.0, 2.0}}) {
        INFO("p=" << c.p << " alpha=" << c.alpha);
        const auto prof = solve_cauchy(make_p_power(c.p), p_double_well(c.p, c.alpha), 0.0);
        const auto oracle = closed_form_oracle(OracleKind::p_tanh, {.p = c.p, .alpha = c.alpha});
        CHECK(sup_oracle_error(prof, oracle, 8.0 / c.alpha) <= 1e-8);
    }
}

TEST_CASE("logistic profile for the asymmetric well") {
    const auto prof = solve_cauchy(make_p_power(2.0), asymmetric_well(2.0, 0.0, 1.0), 0.5);
    const auto oracle =
        closed_form_oracle(OracleKind::asym_logistic, {.p = 2.0, .a = 0.0, .b = 1.0});
    CHECK(sup_oracle_error(prof, oracle, 8.0) <= 1e-8);
    CHECK(interp_q(prof, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quartic well gives the sqrt-2-rate kink") {
    const auto prof = solve_cauchy(make_p_power(2.0), quartic_well(1.0), 0.0);
    const auto oracle = closed_form_oracle(OracleKind::quartic_classic, {.alpha = 1.0});
    CHECK(sup_oracle_error(prof, oracle, 8.0) <= 1e-8);
}

TEST_CASE("energy residual stays below tolerance everywhere") {
    for (const auto& prof :
         {solve_cauchy(make_p_power(2.0), p_double_well(2.0, 1.0), 0.0),
          solve_cauchy(make_mixed(2.0, 4.0), phi_double_well(make_mixed(2.0, 4.0), 1.0), 0.0)}) {
        double sup = 0.0;
        for (double r : prof.energy_residual) sup = std::max(sup, std::fabs(r));
        CHECK(sup <= 1e-8);
    }
}

TEST_CASE("profiles are strictly monotone and confined to the open well interval") {
    const auto prof = solve_cauchy(make_mixed(2.0, 4.0), phi_double_well(make_mixed(2.0, 4.0), 1.0),
                                   0.0);
    for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof.q[i] > prof.q[i - 1]);
    for (std::size_t i = 0; i < prof.size(); ++i) {
        CHECK(prof.q[i] > prof.wells.first);
        CHECK(prof.q[i] < prof.wells.second);
        CHECK(prof.q_prime[i] > 0.0);
    }
}

TEST_CASE("odd symmetry is exact for even potentials") {
    const auto prof = solve_cauchy(make_p_power(3.0), p_double_well(3.0, 1.0), 0.0);
    // the backward side integrates the reflected problem, so samples mirror bitwise
    const std::size_t n = prof.size();
    std::size_t zero = 0;
    while (zero < n && prof.t[zero] < 0.0) ++zero;
    REQUIRE(prof.t[zero] == 0.0);
    for (std::size_t off = 1; off < std::min(zero, n - zero - 1); ++off) {
        CHECK(prof.q[zero + off] == -prof.q[zero - off]);
        CHECK(prof.q_prime[zero + off] == prof.q_prime[zero - off]);
    }
}

TEST_CASE("anchoring at a well is rejected as stationary") {
    CHECK_THROWS_AS(solve_cauchy(make_p_power(2.0), p_double_well(2.0, 1.0), 1.0), solver_error);
    CHECK_THROWS_AS(solve_cauchy(make_p_power(2.0), p_double_well(2.0, 1.0), 1.5), solver_error);
}

TEST_CASE("interp_q reproduces the oracle between samples") {
    const auto prof = solve_cauchy(make_p_power(2.0), p_double_well(2.0, 1.0), 0.0);
    for (double s = -5.0015; s < 5.0; s += 0.1) {
        CHECK(std::fabs(interp_q(prof, s) - std::tanh(s)) <= 1e-8);
        CHECK(std::fabs(interp_q_prime(prof, s) - 1.0 / std::cosh(s) / std::cosh(s)) <= 1e-6);
    }
}

TEST_CASE("decay fit recovers the closed-form rate 2 for the classic kink") {
    const auto prof = solve_cauchy(make_p_power(2.0), p_double_well(2.0, 1.0), 0.0);
    const DecayFit fit = fit_decay(prof);
    CHECK(fit.theta2 >= 1.9);
    CHECK(fit.theta2 <= 2.1);
    CHECK(fit.beta2 >= 1.9);
    CHECK(fit.beta2 <= 2.1);
    CHECK(fit.theta4 >= 1.9);
    CHECK(fit.theta4 <= 2.1);
    CHECK(fit.theta1 > 0.0);
    CHECK(fit.beta1 > 0.0);
    // closed-form tail 1 - tanh t ~ 2 e^{-2t}: amplitudes near 2
    CHECK(fit.theta1 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("fitted envelopes dominate the actual tails") {
    const auto prof = solve_cauchy(make_p_power(3.0), p_double_well(3.0, 1.0), 0.0);
    const DecayFit fit = fit_decay(prof);
    const double t_hi = prof.t.back();
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const double t = prof.t[i];
        if (t < 0.6 * t_hi) continue;
        const double gap = prof.wells.second - prof.q[i];
        CHECK(gap <= 1.05 * fit.theta1 * std::exp(-fit.theta2 * t) + 1e-11);
    }
}

TEST_CASE("closed-form oracles hit their anchor values") {
    const auto kink = closed_form_oracle(OracleKind::p_tanh, {.p = 3.0, .alpha = 2.0});
    CHECK(kink(0.0) == 0.0);
    CHECK(kink(1.0) == doctest::Approx(2.0 * std::tanh(2.0 / std::pow(2.0, 1.0 / 3.0))));
    const auto logi = closed_form_oracle(OracleKind::asym_logistic, {.p = 2.0, .a = 0.0, .b = 1.0});
    CHECK(logi(0.0) == doctest::Approx(0.5));
    CHECK(logi(50.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(logi(-50.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    const auto q4 = closed_form_oracle(OracleKind::quartic_classic, {.alpha = 1.0});
    CHECK(q4(1.0) == doctest::Approx(std::tanh(std::sqrt(2.0))));
}
