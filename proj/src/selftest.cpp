#include "semsel/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semsel/experiment.hpp"

namespace semsel {

namespace {

SelftestCheck make(std::string name, bool passed, std::string detail = {}) {
    return SelftestCheck{std::move(name), passed, std::move(detail)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const ExperimentConfig& base) {
    ExperimentConfig cfg = base;
    cfg.model.num_classes = std::min<std::size_t>(cfg.model.num_classes, 10);
    cfg.model.feature_dim = std::min<std::size_t>(cfg.model.feature_dim, 20);
    cfg.key_dim = std::min(cfg.key_dim, cfg.model.feature_dim);
    cfg.num_sensors = std::min<std::size_t>(cfg.num_sensors, 8);
    cfg.calibration_samples = 2000;
    cfg.trials = 50;
    cfg.sweep_axis = SweepAxis::SnrDb;
    cfg.sweep_values = {-10, 0, 10};
    cfg.schemes.assign(all_schemes().begin(), all_schemes().end());
    cfg.validate();

    std::vector<SelftestCheck> checks;
    const Environment env = prepare_environment(cfg);

    {
        std::stringstream buf;
        write_model(buf, env.model);
        checks.push_back(make("model artifact round-trip", read_model(buf) == env.model));
    }
    {
        std::stringstream buf;
        write_config(buf, cfg);
        ExperimentConfig back = parse_config(buf);
        std::stringstream again;
        write_config(again, back);
        std::stringstream first;
        write_config(first, cfg);
        checks.push_back(make("config round-trip", first.str() == again.str()));
    }

    std::vector<SchemeSpec> specs;
    for (Scheme s : cfg.schemes) {
        for (Ordering o : {Ordering::Random, Ordering::Importance}) {
            specs.push_back({s, o});
        }
    }
    std::size_t violations = 0;
    std::size_t bad_posteriors = 0;
    std::size_t bad_weights = 0;
    bool deterministic = true;
    try {
        for (std::size_t p = 0; p < cfg.sweep_values.size(); ++p) {
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                const auto a = run_trials(env, cfg, specs, p, t);
                const auto b = run_trials(env, cfg, specs, p, t);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    deterministic = deterministic && a[i].predicted_class == b[i].predicted_class &&
                                    a[i].objective == b[i].objective && a[i].num_features == b[i].num_features;
                    for (double x : a[i].pi_hat) {
                        bad_posteriors += (x >= 0.0 && x <= 1.0) ? 0 : 1;
                    }
                    if (!a[i].fallback) {
                        bad_weights += (a[i].rho >= 0.0 && a[i].rho <= 1.0 + 1e-12 && a[i].eta > 0.0 &&
                                        a[i].eta <= 1.0 + 1e-12)
                                           ? 0
                                           : 1;
                    }
                }
            }
        }
    } catch (const InvariantError& e) {
        ++violations;
        checks.push_back(make("slot budget respected", false, e.what()));
    }
    if (violations == 0) {
        checks.push_back(make("slot budget respected", true));
    }
    checks.push_back(make("posterior estimates in [0,1]", bad_posteriors == 0));
    checks.push_back(make("fusion weights normalized", bad_weights == 0));
    checks.push_back(make("trials deterministic", deterministic));

    {
        // Heuristic never beats the exhaustive oracle; both stay non-negative.
        ExperimentConfig small = cfg;
        small.oracle_instances = 20;
        std::size_t bad = 0;
        for (Ordering o : {Ordering::Random, Ordering::Importance}) {
            for (const auto& r : oracle_gap(env, small, o)) {
                bad += (r.heuristic_objective >= 0.0 && r.heuristic_objective <= r.oracle_objective + 1e-9) ? 0 : 1;
            }
        }
        checks.push_back(make("heuristic bounded by oracle", bad == 0, std::to_string(bad) + " violations"));
    }
    {
        std::size_t bad = 0;
        for (double x : {-40.0, -3.0, -0.5, 0.0, 0.5, 3.0, 40.0}) {
            const double q = tail_q(x);
            bad += (q >= 0.0 && q <= 1.0 && std::abs(q + tail_q(-x) - 1.0) < 1e-12) ? 0 : 1;
        }
        checks.push_back(make("tail function symmetric", bad == 0));
    }
    return checks;
}

}  // namespace semsel
