#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "semsel/selection.hpp"

using namespace semsel;

namespace {

struct Instance {
    GmModel model;
    CalibrationStats calib;
    CommConfig comm;
    std::vector<double> scores;
    std::vector<double> rates;
};

Instance random_instance(std::uint64_t seed, std::size_t M, std::size_t D) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance in{build_model({6, D, 8.0, 0.2, 1.0}, seed), CalibrationStats{3.0, 1.0, 2.0, 0.4}, CommConfig{}, {}, {}};
    in.comm.slot_duration_s = 32.0 * static_cast<double>(D) / 1e6 * (0.5 + 2.0 * u(rng));
    for (std::size_t m = 0; m < M; ++m) {
        in.scores.push_back(-2.0 + 8.0 * u(rng));
        in.rates.push_back(1e5 + 2e6 * u(rng));
    }
    return in;
}

SelectionContext context(const Instance& in, double tau = 1.0) {
    SelectionContext ctx;
    ctx.model = &in.model;
    ctx.calib = in.calib;
    ctx.comm = in.comm;
    ctx.temperature = tau;
    ctx.dims_seed = 17;
    return ctx;
}

std::vector<double> pi_of(const Instance& in) {
    std::vector<double> pi;
    for (double s : in.scores) pi.push_back(posterior_estimate(in.calib, s));
    return pi;
}

}  // namespace

TEST_CASE("scheme and ordering names round-trip") {
    for (Scheme s : all_schemes()) {
        CHECK(parse_scheme(scheme_name(s)) == s);
    }
    CHECK(parse_ordering("importance") == Ordering::Importance);
    CHECK_THROWS_AS(parse_scheme("bogus"), ConfigError);
    CHECK_THROWS_AS(parse_ordering("sorted"), ConfigError);
}

TEST_CASE("priority order drops negative margins and sorts by gamma") {
    const std::vector<double> psi{1.0, -0.5, 2.0, 1.0, 0.0};
    const std::vector<double> rates{4.0, 100.0, 1.0, 4.0, 9.0};
    // gamma: 4, -, 4, 4, 0 -> ties by index
    CHECK(priority_order(psi, rates) == std::vector<std::size_t>{0, 2, 3, 4});
    const std::vector<double> outage{4.0, 100.0, 0.0, 4.0, 9.0};
    CHECK(priority_order(psi, outage) == std::vector<std::size_t>{0, 3, 4});
}

TEST_CASE("random dims are nested prefixes for a fixed seed") {
    const auto a = random_dims(5, 30, 9);
    const auto b = random_dims(12, 30, 9);
    CHECK(a.size() == 5);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    CHECK(random_dims(30, 30, 1).size() == 30);
    CHECK_THROWS(random_dims(31, 30, 1));
}

TEST_CASE("proposed schemes respect the budget and match the brute-force oracle on easy cases") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance in = random_instance(seed, 6, 8);
        const auto ctx = context(in);
        const auto pi = pi_of(in);
        for (bool importance : {false, true}) {
            const auto d = importance ? select_importance_ordering(in.scores, in.rates, ctx)
                                      : select_random_ordering(in.scores, in.rates, ctx);
            const auto ex = exhaustive_select(in.scores, in.rates, importance ? Ordering::Importance : Ordering::Random,
                                              ctx);
            const auto brute = oracle::brute_force(in.model, in.scores, pi, in.rates, in.comm.slot_duration_s,
                                                   in.comm.bits_per_feature, 1.0, importance);
            CHECK(ex.objective.value_or(0.0) == doctest::Approx(brute.objective).epsilon(1e-9));
            CHECK(d.objective.value_or(0.0) <= ex.objective.value_or(0.0) + 1e-12);
            if (!d.empty()) {
                std::vector<double> r;
                for (std::size_t m : d.sensors) r.push_back(in.rates[m]);
                CHECK(check_budget(r, d.num_features, in.comm).feasible);
                CHECK(d.feature_dims.size() == d.num_features);
                CHECK(*d.objective == doctest::Approx(decision_objective(d, in.scores, ctx)));
            }
        }
    }
}

TEST_CASE("all-negative margins give an empty proposed decision") {
    Instance in = random_instance(3, 4, 6);
    in.calib = CalibrationStats{3.0, 100.0, 2.0, 0.4};  // every score far below the midpoint
    const auto ctx = context(in);
    CHECK(select_random_ordering(in.scores, in.rates, ctx).empty());
    CHECK(select_importance_ordering(in.scores, in.rates, ctx).empty());
}

TEST_CASE("when2com threshold and fallback") {
    const Instance in = random_instance(5, 4, 6);
    auto ctx = context(in);
    ctx.comm.slot_duration_s = 1.0;
    const std::vector<double> uniform(4, 1.0);
    const auto d = when2com_select(uniform, in.rates, Ordering::Random, ctx);
    CHECK(d.sensors == std::vector<std::size_t>{0});
    const std::vector<double> s{0.0, 3.0, 2.9, -5.0};
    const auto e = when2com_select(s, in.rates, Ordering::Importance, ctx);
    CHECK(e.sensors == std::vector<std::size_t>{1, 2});
    CHECK(e.feature_dims == in.model.top_dims(e.num_features));
}

TEST_CASE("best-channel and all-inclusive benchmarks") {
    const Instance in = random_instance(6, 5, 6);
    auto ctx = context(in);
    ctx.comm.slot_duration_s = 1.0;
    const std::vector<double> rates{1e6, 5e6, 2e6, 5e6, 3e6};
    const auto top2 = best_channel_select(rates, 2, Ordering::Random, ctx);
    CHECK(top2.sensors == std::vector<std::size_t>{1, 3});
    CHECK(best_channel_select(rates, 9, Ordering::Random, ctx).sensors.size() == 5);
    const auto all = all_inclusive_select(rates, FusionMode::Average, Ordering::Random, ctx);
    CHECK(all.sensors.size() == 5);
    CHECK(all.scheme == Scheme::AllAverage);
    CHECK(all.num_features == 6);
    ctx.comm.slot_duration_s = 1e-9;
    CHECK_THROWS_AS(all_inclusive_select(rates, FusionMode::Attentive, Ordering::Random, ctx), InfeasibleSelection);
    CHECK_THROWS_AS(best_channel_select(rates, 1, Ordering::Random, ctx), InfeasibleSelection);
}

TEST_CASE("exhaustive search limits and monotonicity in the slot") {
    Instance in = random_instance(8, 5, 6);
    auto ctx = context(in);
    CHECK_THROWS(exhaustive_select(in.scores, in.rates, Ordering::Random, ctx, 4));
    double last = -1.0;
    for (double t : {1e-5, 1e-4, 1e-3, 1e-2}) {
        ctx.comm.slot_duration_s = t;
        const double f = exhaustive_select(in.scores, in.rates, Ordering::Importance, ctx).objective.value_or(0.0);
        CHECK(f >= last);
        last = f;
    }
}
