#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetero/potentials.hpp"

using namespace hetero;

TEST_CASE("quartic well closed form") {
    const Potential P = quartic_well(1.0);
    CHECK(P.V(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(P.V(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(P.V(-1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    // V' = 4 t (t^2 - 1)
    CHECK(P.V_prime(0.5) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(P.well_low == -1.0);
    CHECK(P.well_high == 1.0);
    CHECK(P.even_symmetric);
}

TEST_CASE("p-double-well closed form |t^2-a^2|^p / p") {
    const Potential P = p_double_well(2.0, 1.0);
    CHECK(P.V(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(P.V(2.0) == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(P.V_prime(0.5) == doctest::Approx(2.0 * 0.5 * (0.25 - 1.0)).epsilon(1e-12));

    const Potential P3 = p_double_well(3.0, 2.0);
    CHECK(P3.V(0.0) == doctest::Approx(64.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("phi-double-well built from the p-power kernel matches the closed form") {
    const PhiKernel k = make_p_power(2.0);
    const Potential table = phi_double_well(k, 1.0);
    const Potential exact = p_double_well(2.0, 1.0);
    CHECK(table.phi_dw_kernel_name == k.name);
    for (double t = -1.6; t <= 1.6; t += 0.05) {
        CHECK(table.V(t) == doctest::Approx(exact.V(t)).scale(1.0).epsilon(1e-9));
        CHECK(table.V_prime(t) == doctest::Approx(exact.V_prime(t)).scale(1.0).epsilon(1e-8));
    }
}

TEST_CASE("asymmetric well |(t-a)(t-b)|^p / p") {
    const Potential P = asymmetric_well(2.0, 0.0, 1.0);
    CHECK(P.V(0.5) == doctest::Approx(0.25 * 0.25 / 2.0).epsilon(1e-13));
    CHECK(P.V(0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(P.V(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(P.well_low == 0.0);
    CHECK(P.well_high == 1.0);
    CHECK(P.midpoint() == 0.5);
    // mirror symmetry about the midpoint still holds for this family
    CHECK(P.even_symmetric);
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(p_double_well(0.5, 1.0), construction_error);
    CHECK_THROWS_AS(p_double_well(2.0, 0.0), construction_error);
    CHECK_THROWS_AS(quartic_well(-1.0), construction_error);
    CHECK_THROWS_AS(asymmetric_well(2.0, 1.0, 1.0), construction_error);
    CHECK_THROWS_AS(asymmetric_well(2.0, 2.0, 1.0), construction_error);
}

TEST_CASE("hypothesis certification passes on benchmark pairs") {
    struct Pair {
        PhiKernel k;
        Potential P;
    };
    const std::vector<Pair> pairs = {
        {make_p_power(2.0), p_double_well(2.0, 1.0)},
        {make_p_power(3.0), p_double_well(3.0, 1.0)},
        {make_p_power(2.0), quartic_well(1.0)},
        {make_mixed(2.0, 4.0), phi_double_well(make_mixed(2.0, 4.0), 1.0)},
        {make_p_power(2.0), asymmetric_well(2.0, 0.0, 1.0)},
    };
    for (const auto& pr : pairs) {
        INFO(pr.k.name << " / " << pr.P.name);
        const auto cert = certify_hypotheses(pr.P, pr.k);
        CHECK(cert.v1_ok);
        CHECK(cert.v2_ok);
        CHECK(cert.v3_ok);
        CHECK(cert.v4_ok);
        CHECK(cert.v5_ok);
        CHECK(cert.rho > 0.0);
        CHECK(cert.sup_V_prime > 0.0);
        CHECK(cert.a1 > 0.0);
        CHECK(cert.a2 >= cert.a1);
    }
}

TEST_CASE("certification flags a potential that dips negative") {
    const Potential bad = raw_potential(
        [](double t) { return (t * t - 1.0) * (t * t - 1.0) - 0.1; },
        [](double t) { return 4.0 * t * (t * t - 1.0); }, -1.0, 1.0, "dipped");
    const auto cert = certify_hypotheses(bad, make_p_power(2.0));
    CHECK_FALSE(cert.v1_ok);
    CHECK_FALSE(cert.ok());
}

TEST_CASE("certification flags missing strict convexity at a well") {
    // |cos(pi t / 2)| is concave on both sides of each well, so no convexity
    // radius can be certified
    const Potential wavy = raw_potential(
        [](double t) { return std::fabs(std::cos(0.5 * M_PI * t)); },
        [](double t) {
            const double c = std::cos(0.5 * M_PI * t);
            return -0.5 * M_PI * std::sin(0.5 * M_PI * t) * (c >= 0.0 ? 1.0 : -1.0);
        },
        -1.0, 1.0, "wavy");
    const auto cert = certify_hypotheses(wavy, make_p_power(2.0));
    CHECK_FALSE(cert.v5_ok);
    CHECK_FALSE(cert.ok());
}

TEST_CASE("potential JSON round trip") {
    const PhiKernel k = make_p_power(2.0);
    const Potential P =
        potential_from_json({{"kind", "p-dw"}, {"params", {{"p", 2.0}, {"alpha", 1.0}}}}, k);
    CHECK(P.V(0.0) == doctest::Approx(0.5).epsilon(1e-13));
    const Potential Q = potential_from_json({{"kind", "quartic"}, {"params", {{"alpha", 2.0}}}}, k);
    CHECK(Q.well_high == 2.0);
    const Potential A = potential_from_json(
        {{"kind", "asym"}, {"params", {{"p", 2.0}, {"a", 0.0}, {"b", 1.0}}}}, k);
    CHECK(A.midpoint() == 0.5);
    const Potential F = potential_from_json({{"kind", "phi-dw"}, {"params", {{"alpha", 1.0}}}}, k);
    CHECK(F.phi_dw_kernel_name == k.name);
    CHECK_THROWS_AS(potential_from_json({{"kind", "bogus"}, {"params", {}}}, k),
                    construction_error);
}
