#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetero/mc_truncation.hpp"

using namespace hetero;

namespace {

// True infimum of (phi_L(t) t)' / phi_L(t). On [0, sqrt(L)] the ratio is
// 1/(1+t^2), decreasing to 1/(1+L) at the knot. On the cap, with
// u = t^2 - L - 1 and c = 4L + 3, it is 1 + 4u(u+L+1)/(u^2+c); its interior
// critical point u* = (c - sqrt(c^2 + c(L+1)^2))/(L+1) undercuts the knot
// value whenever it lands in [-1, 0].
double true_lower_exponent(double L) {
    const double c = 4.0 * L + 3.0;
    const double ustar = (c - std::sqrt(c * c + c * (L + 1.0) * (L + 1.0))) / (L + 1.0);
    double rmin = 1.0 / (1.0 + L);
    if (ustar >= -1.0 && ustar <= 0.0)
        rmin = std::min(rmin, 1.0 + 4.0 * ustar * (ustar + L + 1.0) / (ustar * ustar + c));
    return 1.0 + rmin;
}

std::vector<double> dense_mc_grid(double L) {
    std::vector<double> g;
    const double lo = 0.5 * std::sqrt(L), hi = std::sqrt(L + 1.0);
    const int n = 400000;
    for (int i = 0; i <= n; ++i) g.push_back(lo + (hi - lo) * i / double(n));
    return g;
}

}  // namespace

TEST_CASE("truncation constants at L = 1") {
    const auto p = TruncationParams::make(1.0);
    CHECK(p.x_L == doctest::Approx(std::sqrt(2.0) / 16.0).epsilon(1e-14));
    CHECK(p.y_L == doctest::Approx(7.0 * std::sqrt(2.0) / 16.0).epsilon(1e-14));
    // glue value: phi(sqrt(1)) = 1/sqrt(2) = x*1 + y = 8x
    CHECK(8.0 * p.x_L == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(p.m_L == 2.0);
    CHECK_THROWS_AS(TruncationParams::make(0.0), construction_error);
}

TEST_CASE("closed-form lower exponent values") {
    CHECK(TruncationParams::make(0.25).l_L == doctest::Approx(7.4375 / 5.0).epsilon(1e-14));
    CHECK(TruncationParams::make(1.0).l_L == doctest::Approx(11.0 / 8.0).epsilon(1e-14));
    CHECK(TruncationParams::make(4.0).l_L == doctest::Approx(23.0 / 20.0).epsilon(1e-14));
}

TEST_CASE("kernel is C^1 across both knots") {
    for (double L : {0.25, 1.0, 4.0}) {
        INFO("L=" << L);
        const auto p = TruncationParams::make(L);
        const double h = 1e-7;
        for (double knot : {std::sqrt(L), std::sqrt(L + 1.0)}) {
            CHECK(std::fabs(phi_L(p, knot - 1e-13) - phi_L(p, knot + 1e-13)) <= 1e-12);
            CHECK(std::fabs(phi_L_prime(p, knot - 1e-13) - phi_L_prime(p, knot + 1e-13)) <=
                  1e-10);
            // derivative consistency against a secant
            const double secant = (phi_L(p, knot + h) - phi_L(p, knot - h)) / (2.0 * h);
            CHECK(secant == doctest::Approx(phi_L_prime(p, knot)).scale(1.0).epsilon(1e-5));
        }
        CHECK(phi_L(p, 0.0) == 1.0);
        CHECK(phi_L(p, 10.0 * std::sqrt(L + 1.0)) == p.y_L);
        CHECK(phi_L(p, std::sqrt(L)) ==
              doctest::Approx(mc_kernel_untruncated(std::sqrt(L))).epsilon(1e-14));
    }
}

TEST_CASE("measured lower exponent is the ratio infimum; closed form stays below it") {
    for (double L : {0.25, 1.0, 4.0}) {
        INFO("L=" << L);
        const PhiKernel k = make_mc_truncated(L);
        const auto [lo, hi] = estimate_exponents(k, dense_mc_grid(L));
        CHECK(lo == doctest::Approx(true_lower_exponent(L)).epsilon(1e-6));
        // the published closed form is a valid lower bound, not the infimum
        CHECK(TruncationParams::make(L).l_L <= lo + 1e-9);
        CHECK(hi <= 2.0 + 1e-9);
    }
    // the upper exponent 2 is attained in the t -> 0 limit
    const auto [lo0, hi0] = estimate_exponents(make_mc_truncated(1.0), {1e-8, 1e-6, 1e-4});
    CHECK(hi0 == doctest::Approx(2.0).epsilon(1e-6));
    (void)lo0;
}

TEST_CASE("slope certificate and untruncated residual for a shallow quartic well") {
    const auto [prof, cert] = solve_mc(quartic_well(0.1), 1.0);
    CHECK(cert.slope_cap == doctest::Approx(1.0));
    CHECK(cert.max_slope < 1.0);
    CHECK(cert.passed);
    CHECK(cert.untruncated_residual_sup <= 1e-6);

    const auto rep = mc_sandwich_check(prof, 0.1, TruncationParams::make(1.0));
    CHECK(rep.passed);
    CHECK(rep.kappa > 0.0);
    CHECK(rep.L_effective == doctest::Approx(cert.max_slope * cert.max_slope));
}

TEST_CASE("steep negative control fails the slope certificate") {
    const auto [prof, cert] = solve_mc(quartic_well(5.0), 0.01);
    (void)prof;
    CHECK_FALSE(cert.passed);
    CHECK(cert.max_slope >= cert.slope_cap);
}
