#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ri/cli.hpp"
#include "ri/measure.hpp"
#include "ri/numeric.hpp"
#include "ri/orlicz.hpp"

using namespace ri;

TEST_CASE("orlicz function vocabulary evaluates") {
    const auto p2 = OrliczFunction::power(2.0);
    CHECK(p2(0.0) == 0.0);
    CHECK(p2(3.0) == 9.0);
    CHECK(p2.convex());
    const auto mp = OrliczFunction::power_pair_min(1.0, 2.0, 1.0);
    CHECK(mp(0.5) == 0.25);  // (tx)^q wins below the knee
    CHECK(mp(2.0) == 2.0);   // x^p wins above
    const auto h = OrliczFunction::hinge(2.0);
    CHECK(h(1.0) == 0.0);
    CHECK(h(3.5) == 1.5);
    const auto m = OrliczFunction::min_of(p2, OrliczFunction::power(1.0));
    CHECK(m(0.5) == 0.25);
    CHECK(m(2.0) == 2.0);
    const auto s = OrliczFunction::scaled(0.5, p2);
    CHECK(s(3.0) == 4.5);
    CHECK_FALSE(p2.describe().empty());
}

TEST_CASE("orlicz function construction validates") {
    CHECK_THROWS_AS(OrliczFunction::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::power(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::power_pair_min(2.0, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::power_pair_min(2.0, 2.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::power_pair_min(1.0, 2.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::hinge(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(OrliczFunction::scaled(0.0, OrliczFunction::power(1.0)),
                    std::invalid_argument);
}

TEST_CASE("luxemburg norm of a power function is the p-norm") {
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto f = cli::random_variable(11, i, 12);
        const double p = std::vector<double>{0.5, 1.0, 2.0, 3.0}[i % 4];
        const double lux = orlicz_norm(f, OrliczFunction::power(p));
        const double direct = p_norm(f, p);
        CHECK(std::abs(lux - direct) <= 1e-9 * std::max(1.0, direct));
    }
}

TEST_CASE("min-power norm of the constant one is one") {
    const auto f = DiscreteRandomVariable::constant(1.0);
    const auto phi = OrliczFunction::power_pair_min(1.0, 2.0, 1.0);
    const double v = orlicz_norm(f, phi);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hinge norm of a constant has a closed form") {
    // E (c/lambda - a)^+ <= 1 iff lambda >= c / (a + 1)
    const auto f = DiscreteRandomVariable::constant(3.0);
    const double v = orlicz_norm(f, OrliczFunction::hinge(2.0));
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("luxemburg norm is positively homogeneous") {
    const auto phi = OrliczFunction::power_pair_min(1.0, 2.0, 0.5);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto f = cli::random_variable(13, i, 10);
        const double base = orlicz_norm(f, phi);
        const double scaled = orlicz_norm(f.scaled(2.5), phi);
        CHECK(std::abs(scaled - 2.5 * base) <= 1e-8 * std::max(1.0, base));
    }
}

TEST_CASE("luxemburg norm is monotone under domination") {
    const auto phi = OrliczFunction::power_pair_min(1.0, 3.0, 2.0);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto [f, g] = cli::dominated_pair(17, i, 10);
        CHECK(leq_with_slack(orlicz_norm(f, phi), orlicz_norm(g, phi)));
    }
}

TEST_CASE("zero variable is the degenerate sentinel") {
    const auto res = orlicz_norm_full(DiscreteRandomVariable::constant(0.0),
                                      OrliczFunction::power(2.0));
    CHECK(res.degenerate);
    CHECK(res.value == 0.0);
    CHECK(res.degenerate_reason != nullptr);
}

TEST_CASE("returned lambda satisfies the unit-ball inequality") {
    const auto phi = OrliczFunction::power_pair_min(0.5, 2.0, 1.0);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto f = cli::random_variable(19, i, 12);
        const double lam = orlicz_norm(f, phi);
        if (lam == 0.0) continue;
        const double mean = expect_phi(f, [&](double x) { return phi(x); }, lam);
        CHECK(mean <= 1.0 + 1e-9);
    }
}

TEST_CASE("growth certification: analytic powers") {
    const auto up = verify_growth_class(OrliczFunction::power(2.0), 2.0,
                                        GrowthSide::upper);
    CHECK(up.pass);
    CHECK(up.analytic);
    const auto low = verify_growth_class(OrliczFunction::power(2.0), 2.0,
                                         GrowthSide::lower);
    CHECK(low.pass);
    // a too-small upper order fails on the grid or analytically
    CHECK_FALSE(verify_growth_class(OrliczFunction::power(2.0), 1.5,
                                    GrowthSide::upper)
                    .pass);
}

TEST_CASE("growth certification: min-power and hinge") {
    const auto mp = OrliczFunction::power_pair_min(1.0, 2.0, 1.0);
    CHECK(verify_growth_class(mp, 2.0, GrowthSide::upper).pass);
    CHECK(verify_growth_class(mp, 1.0, GrowthSide::lower).pass);
    // the hinge rises from its knee faster than any homothety allows
    CHECK_FALSE(verify_growth_class(OrliczFunction::hinge(1.0), 2.0,
                                    GrowthSide::upper)
                    .pass);
    CHECK(verify_growth_class(OrliczFunction::hinge(1.0), 1.0,
                              GrowthSide::lower)
              .pass);
}

TEST_CASE("split infimum never exceeds the one-sided norms") {
    const auto phi = OrliczFunction::power(1.0);
    const auto psi = OrliczFunction::power(2.0);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto f = cli::random_variable(23, i, 12);
        const auto sb = split_infimum(f, phi, psi);
        CHECK(leq_with_slack(sb.value, orlicz_norm(f, phi)));
        CHECK(leq_with_slack(sb.value, orlicz_norm(f, psi)));
        CHECK(sb.part1_values.size() == sb.part2_values.size());
    }
}

TEST_CASE("split infimum of equal power functions is the norm itself") {
    // with phi = psi convex the triangle inequality pins the infimum
    const auto phi = OrliczFunction::power(2.0);
    const auto f = DiscreteRandomVariable::constant(1.0);
    const auto sb = split_infimum(f, phi, phi);
    CHECK(sb.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("split sandwich holds across power pairs") {
    const double powers[4] = {0.5, 1.0, 2.0, 3.0};
    for (std::uint64_t i = 0; i < 32; ++i) {
        const auto f = cli::random_variable(29, i, 12);
        const auto rep = check_split_sandwich(
            f, OrliczFunction::power(powers[(i / 4) % 4]),
            OrliczFunction::power(powers[i % 4]));
        CHECK(rep.pass);
        CHECK(rep.lower <= rep.value + 1e-9 * std::max(1.0, rep.value));
        CHECK(rep.value <= rep.upper + 1e-9 * std::max(1.0, rep.upper));
    }
}

TEST_CASE("sandwich endpoints for the unit constant") {
    const auto phi = OrliczFunction::power(2.0);
    const auto rep = check_split_sandwich(DiscreteRandomVariable::constant(1.0),
                                          phi, phi);
    CHECK(rep.pass);
    // halving the function widens the unit ball by sqrt(2)
    CHECK(rep.lower == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.upper == doctest::Approx(2.0).epsilon(1e-9));
}
