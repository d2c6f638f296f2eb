#include <doctest.h>

#include <cmath>
#include <sstream>

#include "semsel/experiment.hpp"

using namespace semsel;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.model = {8, 12, 8.0, 0.1, 1.0};
    c.key_dim = 6;
    c.num_sensors = 6;
    c.trials = 60;
    c.calibration_samples = 2000;
    c.bound_trials = 300;
    c.oracle_instances = 15;
    c.sweep_values = {-10, 10};
    return c;
}

}  // namespace

TEST_CASE("point settings follow the sweep axis") {
    ExperimentConfig c = small_config();
    CHECK(point_setting(c, 10.0).comm.mean_rx_snr() == doctest::Approx(10.0));
    c.sweep_axis = SweepAxis::PriorRelevance;
    CHECK(point_setting(c, 0.7).prior_relevance == 0.7);
    c.sweep_axis = SweepAxis::NumSensors;
    CHECK(point_setting(c, 3.0).num_sensors == 3);
}

TEST_CASE("trial outcomes are consistent and reproducible") {
    const ExperimentConfig c = small_config();
    const Environment env = prepare_environment(c);
    std::vector<SchemeSpec> specs;
    for (Scheme s : c.schemes) specs.push_back({s, Ordering::Random});
    for (std::size_t t = 0; t < 20; ++t) {
        const auto a = run_trials(env, c, specs, 0, t);
        const auto b = run_trials(env, c, specs, 0, t);
        REQUIRE(a.size() == specs.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].correct == (a[i].predicted_class == a[i].true_class));
            CHECK(a[i].predicted_class == b[i].predicted_class);
            CHECK(a[i].true_class == a[0].true_class);  // shared scenario
            CHECK(a[i].fallback == (a[i].num_selected == 0));
            if (!a[i].fallback) {
                CHECK(a[i].pi_hat.size() == a[i].num_selected);
                CHECK(a[i].eta > 0.0);
                CHECK(a[i].eta <= 1.0 + 1e-12);
            }
        }
        const auto single = run_trial(env, c, specs[2], 0, t);
        CHECK(single.predicted_class == a[2].predicted_class);
    }
    CHECK_THROWS(run_trials(env, c, specs, 5, 0));
}

TEST_CASE("sweep rows and CSV") {
    const ExperimentConfig c = small_config();
    const Environment env = prepare_environment(c);
    const auto rows = sweep(env, c, Ordering::Importance);
    CHECK(rows.size() == c.schemes.size() * c.sweep_values.size());
    for (const auto& r : rows) {
        CHECK(r.accuracy >= 0.0);
        CHECK(r.accuracy <= 1.0);
        CHECK(r.std_err == doctest::Approx(std::sqrt(r.accuracy * (1.0 - r.accuracy) / 60.0)));
    }
    std::stringstream a, b;
    write_sweep_csv(a, rows);
    write_sweep_csv(b, sweep(env, c, Ordering::Importance));
    CHECK(a.str() == b.str());
    std::string header;
    std::getline(a, header);
    CHECK(header ==
          "sweep_axis,sweep_value,scheme,trials,accuracy,std_err,mean_num_sensors,mean_num_features,mean_objective");
}

TEST_CASE("bound validation covers k = 1..M") {
    ExperimentConfig c = small_config();
    c.mean_rx_snr_db = 20.0;
    const Environment env = prepare_environment(c);
    const auto rows = validate_bound(env, c, Ordering::Random);
    REQUIRE(rows.size() == c.num_sensors);
    CHECK(rows.front().k == 1);
    CHECK(rows.back().k == c.num_sensors);
    const auto [kt, ke] = bound_argmax(rows);
    CHECK(kt >= 1);
    CHECK(ke <= c.num_sensors);

    for (const auto& r : rows) {
        CHECK(r.empirical_acc >= 0.0);
        CHECK(r.empirical_acc <= 1.0);
        CHECK(r.theory_lb <= 1.0);
    }
}

TEST_CASE("enumerated expectation on small cases") {
    const GmModel m = build_model({5, 6, 4.0, 0.2, 1.0}, 2);
    const CalibrationStats calib{2.0, 0.0, 1.0, 0.5};
    const std::vector<double> scores{0.3};
    const std::vector<std::size_t> sel{0};
    const double pi = posterior_estimate(calib, 0.3);
    const double g = m.g_min();
    const double d = m.delta_max();
    const double expect = pi * conditional_accuracy_lb(g, d, 1.0, 1.0, 5) +
                          (1.0 - pi) * conditional_accuracy_lb(g, d, 0.0, 1.0, 5);
    CHECK(enumerate_expected_accuracy(m, calib, scores, sel, 6, Ordering::Random, 1.0) ==
          doctest::Approx(expect).epsilon(1e-12));
    // certain relevance collapses to the rho = 1 bound
    const CalibrationStats sure{2.0, -1e6, 1.0, 0.5};
    const std::vector<double> s2{0.0, 1.0};
    const std::vector<std::size_t> sel2{0, 1};
    const auto w = softmax_weights(s2, 1.0);
    const double eta = w.weights[0] * w.weights[0] + w.weights[1] * w.weights[1];
    CHECK(enumerate_expected_accuracy(m, sure, s2, sel2, 3, Ordering::Importance, 1.0) ==
          doctest::Approx(conditional_accuracy_lb(m.g_min_top(3), m.delta_max_top(3), 1.0, eta, 5)));
    std::vector<double> many(16, 0.0);
    std::vector<std::size_t> idx(16);
    for (std::size_t i = 0; i < 16; ++i) idx[i] = i;
    CHECK_THROWS(enumerate_expected_accuracy(m, calib, many, idx, 6, Ordering::Random, 1.0));
}

TEST_CASE("oracle gap rows are well formed") {
    const ExperimentConfig c = small_config();
    const Environment env = prepare_environment(c);
    for (Ordering o : {Ordering::Random, Ordering::Importance}) {
        const auto rows = oracle_gap(env, c, o);
        CHECK(rows.size() == 15);
        for (const auto& r : rows) {
            CHECK(r.gap >= -1e-12);
            CHECK(r.gap <= 1.0);
            CHECK(r.snr_db >= -10.0);
            CHECK(r.snr_db <= 10.0);
        }
        CHECK(gap_quantile(rows, 0.5) <= gap_quantile(rows, 0.95));
    }
}

TEST_CASE("metadata sidecar is itself a loadable config") {
    const ExperimentConfig c = small_config();
    const Environment env = prepare_environment(c);
    std::stringstream meta;
    write_metadata(meta, c, env, "sweep");
    const auto back = parse_config(meta);
    std::stringstream x, y;
    write_config(x, c);
    write_config(y, back);
    CHECK(x.str() == y.str());
}
