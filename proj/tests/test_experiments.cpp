#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ri/cli.hpp"
#include "ri/experiments.hpp"
#include "ri/measure.hpp"
#include "ri/numeric.hpp"
#include "ri/orlicz.hpp"
#include "ri/tangent.hpp"

using namespace ri;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CorpusSpec spec_of(CorpusKind kind, std::size_t count, std::uint64_t seed) {
    CorpusSpec s;
    s.kind = kind;
    s.count = count;
    s.min_depth = 2;
    s.max_depth = 6;
    s.value_range = kind == CorpusKind::random_adapted ? 3 : 4;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("instances replay and respect the spec") {
    const auto spec = spec_of(CorpusKind::predictable_multiplier, 10, 3);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const auto a = make_instance(spec, i);
        const auto b = make_instance(spec, i);
        CHECK(a.levels() == b.levels());
        CHECK(a.depth() >= spec.min_depth);
        CHECK(a.depth() <= spec.max_depth);
        for (const auto& level : a.levels())
            for (const double v : level) {
                CHECK(std::abs(v) <= spec.value_range);
                CHECK(v * 4.0 == std::round(v * 4.0));  // quarter steps
            }
    }
    const auto rad = spec_of(CorpusKind::rademacher, 5, 3);
    for (std::size_t i = 0; i < rad.count; ++i) {
        const auto f = make_instance(rad, i);
        for (const auto& level : f.levels())
            for (const double v : level) CHECK(std::abs(v) == 1.0);
    }
}

TEST_CASE("moment comparison is exact where cancellation is structural") {
    // mean-zero innovations kill every cross term on both sides, and the
    // arithmetic is dyadic, so second moments agree to the last bit
    const auto moments = run_moment_comparison(
        spec_of(CorpusKind::predictable_multiplier, 12, 7), {1.0, 2.0, 3.0});
    const std::size_t cols = 4;  // 1, 2, 3, inf
    REQUIRE(moments.rows.size() == 12 * cols);
    for (std::size_t i = 0; i < 12; ++i) {
        const auto& row2 = moments.rows[i * cols + 1];
        CHECK(row2.param == "p=2");
        if (!row2.degenerate) CHECK(row2.ratio == 1.0);
    }
    CHECK(moments.all_finite);

    const auto rad = run_moment_comparison(spec_of(CorpusKind::rademacher, 8, 7),
                                           {1.0, 2.0});
    for (const auto& row : rad.rows) {
        CHECK_FALSE(row.degenerate);
        CHECK(row.ratio == 1.0);  // identical sum laws, identical arithmetic
    }
}

TEST_CASE("orlicz ratio is the p-norm ratio to the p-th power") {
    const auto spec = spec_of(CorpusKind::random_adapted, 15, 9);
    const auto phi3 = run_decoupling_comparison(spec, OrliczFunction::power(3.0), 3.0);
    const auto moments = run_moment_comparison(spec, {1.0, 2.0, 3.0});
    REQUIRE(phi3.rows.size() == 15);
    for (std::size_t i = 0; i < 15; ++i) {
        const auto& a = phi3.rows[i];
        const auto& b = moments.rows[i * 4 + 2];
        REQUIRE(a.degenerate == b.degenerate);
        if (a.degenerate || !std::isfinite(a.ratio)) continue;
        const double want = std::pow(b.ratio, 3.0);
        CHECK(std::abs(a.ratio - want) <= 1e-9 * std::max(1.0, want));
        // the implied constant normalizes by 1/(1+order)
        CHECK(a.constant == doctest::Approx(std::pow(a.ratio, 0.25)).epsilon(1e-12));
    }
}

TEST_CASE("lorentz diagonal matches the moment column") {
    const auto spec = spec_of(CorpusKind::random_adapted, 12, 15);
    const auto lor = run_lorentz_comparison(spec, {{1, 1}, {2, 2}});
    const auto moments = run_moment_comparison(spec, {2.0});
    for (std::size_t i = 0; i < 12; ++i) {
        const auto& a = lor.rows[i * 2 + 1];
        const auto& b = moments.rows[i * 2];
        REQUIRE(a.degenerate == b.degenerate);
        if (a.degenerate) continue;
        CHECK(std::abs(a.ratio - b.ratio) <= 1e-9 * std::max(1.0, b.ratio));
    }
}

TEST_CASE("decoupling comparison demands a certified growth order") {
    const auto spec = spec_of(CorpusKind::predictable_multiplier, 2, 1);
    CHECK_THROWS_AS(
        run_decoupling_comparison(spec, OrliczFunction::hinge(1.0), 2.0),
        std::invalid_argument);
}

TEST_CASE("worker threads do not change the report") {
    const auto spec = spec_of(CorpusKind::random_adapted, 9, 21);
    const auto a = run_moment_comparison(spec, {1.0, 2.0});
    const auto b = run_moment_comparison(spec, {1.0, 2.0}, 4);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].lhs == b.rows[i].lhs);
        CHECK(a.rows[i].rhs == b.rows[i].rhs);
        CHECK(a.rows[i].param == b.rows[i].param);
    }
    CHECK(a.median_ratio == b.median_ratio);
}

TEST_CASE("norm domination chain on an exact scalar pair") {
    const auto [f, g] = cli::dominated_pair(33, 4, 10);  // even stream: one scalar
    const auto grid = default_t_grid();
    const auto rep = run_norm_domination_chain(f, g, {2.0, 2.0}, grid);
    CHECK(rep.couple_p == 1.0);
    CHECK(rep.couple_q == 4.0);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.k_domination_ok);
    CHECK(rep.k_factor == doctest::Approx(std::exp2(3.0)).epsilon(1e-15));
    CHECK(rep.pass);
    // a pair violating the hypothesis is reported, not failed
    const DiscreteRandomVariable big({{50.0, 0.5}, {0.0, 0.5}});
    const DiscreteRandomVariable small({{1.0, 0.5}, {0.0, 0.5}});
    const auto vac = run_norm_domination_chain(big, small, {2.0, 2.0}, grid);
    CHECK_FALSE(vac.hypothesis_ok);
    CHECK(vac.pass);
}

TEST_CASE("blowup construction validates its shape") {
    CHECK_THROWS_AS(blowup_construction(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(blowup_construction(2, 3), std::invalid_argument);   // < 2^k
    CHECK_THROWS_AS(blowup_construction(3, 10), std::invalid_argument);  // not multiple
    CHECK_THROWS_AS(blowup_construction(2, 28), std::invalid_argument);  // N_k > 40
    CHECK_THROWS_AS(blowup_construction(21, 1 << 21), std::invalid_argument);
}

TEST_CASE("blowup oracle values for the small cases") {
    const auto r24 = blowup_construction(2, 4);
    CHECK(r24.hinge_point == 7.5);
    CHECK(r24.block_bounds == std::vector<int>{4, 6});
    CHECK(r24.lhs == doctest::Approx(1.0 / 128.0).epsilon(1e-12));
    CHECK(r24.rhs == 0.0);
    CHECK(r24.ratio == kInf);
    CHECK(r24.bound == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r24.bound_ok);
    REQUIRE(r24.brute_lhs.has_value());
    CHECK(*r24.brute_lhs == doctest::Approx(r24.lhs).epsilon(1e-12));
    CHECK(*r24.brute_rhs == 0.0);
    CHECK(r24.brute_agrees);
    double mass = 0.0;
    for (const double p : r24.level_probs) mass += p;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r24.level_probs[0] == doctest::Approx(15.0 / 16.0).epsilon(1e-15));

    const auto r38 = blowup_construction(3, 8);
    CHECK(r38.lhs == doctest::Approx(3.0 * std::exp2(-16.0)).epsilon(1e-12));
    CHECK(r38.rhs == 0.0);
    CHECK(r38.bound == doctest::Approx(16.0 / 72.0).epsilon(1e-12));
    CHECK(r38.bound_ok);
    CHECK_FALSE(r38.brute_lhs.has_value());  // 2 N_k > 24
}

TEST_CASE("blowup bound grows with the first block length") {
    const double b1 = blowup_construction(2, 4).bound;
    const double b2 = blowup_construction(2, 8).bound;
    const double b3 = blowup_construction(2, 12).bound;
    CHECK(b1 < b2);
    CHECK(b2 < b3);
}

TEST_CASE("first case with mass past the knee on the decoupled side") {
    // k = 4 is the smallest k where (k/4) max|decoupled sum| reaches the hinge
    const auto rep = blowup_construction(4, 16);
    CHECK(rep.block_bounds == std::vector<int>{16, 24, 28, 30});
    CHECK(rep.rhs > 0.0);
    CHECK(std::isfinite(rep.ratio));
    CHECK(rep.bound == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("blowup tables agree with the path-space engines") {
    const auto rep = blowup_construction(2, 4);
    const auto f = blowup_multiplier(2, 4).times_rademacher();
    CHECK(f.depth() == 6);
    const auto hinge = OrliczFunction::hinge(rep.hinge_point);
    const auto phi = [&](double x) { return hinge(x); };
    const double lhs =
        expect_phi(sum_distribution(f, SumMode::enumeration), phi);
    CHECK(lhs == doctest::Approx(rep.lhs).epsilon(1e-12));
    // the decoupled side is scaled by k/4 inside the hinge
    const double rhs = expect_phi(
        sum_distribution(decouple(f), SumMode::level_dp), phi, 4.0 / 2.0);
    CHECK(rhs == rep.rhs);
    CHECK(rhs == 0.0);
}

TEST_CASE("constant table aggregates by experiment and parameter") {
    CHECK(estimate_constants({}).empty());
    RatioReport rep;
    rep.experiment = "demo";
    rep.rows = {{0, "p=1", 1, 1, 1.0, 2.0, false},
                {1, "p=1", 1, 1, 1.0, 4.0, false},
                {2, "p=1", 0, 0, 0.0, 0.0, true},
                {3, "p=2", 1, 1, 1.0, 5.0, false}};
    const auto table = estimate_constants({rep});
    REQUIRE(table.size() == 2);
    CHECK(table[0].param == "p=1");
    CHECK(table[0].instances == 3);
    CHECK(table[0].degenerate == 1);
    CHECK(table[0].max_constant == 4.0);
    CHECK(table[0].median_constant == 3.0);
    CHECK(table[1].max_constant == 5.0);
    CHECK(table[1].median_constant == 5.0);  // single instance: max = median
}

TEST_CASE("small sweep passes its own assertions") {
    const auto outcome = cli::run_sweep(3, 30);
    CHECK(outcome.pass);
    CHECK(outcome.report.at("all_finite").get<bool>());
    CHECK(outcome.report.at("cross_consistency_ok").get<bool>());
    CHECK(outcome.report.at("lorentz_moment_match_ok").get<bool>());
    CHECK_FALSE(outcome.report.at("constants").empty());
}
