#include "semsel/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "semsel/fusion.hpp"

namespace semsel {

namespace {

// Stream labels for derive_seed.
enum : std::uint64_t {
    kModelStream = 0xA0,
    kCalibStream = 0xB0,
    kScenarioStream = 1,
    kChannelStream = 2,
    kDimsStream = 3,
    kGuessStream = 4,
    kBoundScenario = 5,
    kBoundChannel = 6,
    kBoundDims = 7,
    kBoundGuess = 8,
    kOracleScenario = 9,
    kOracleChannel = 10,
    kOracleSnr = 11,
};

std::vector<double> scores_for(const Environment& env, const Scenario& sc) {
    const auto u = env.matching.key_projection(encode_query(env.matching, sc.query_feature));
    std::vector<double> scores(sc.features.rows());
    for (std::size_t m = 0; m < scores.size(); ++m) {
        scores[m] = dot(u, sc.features.row(m));
    }
    return scores;
}

std::size_t uniform_guess(std::size_t num_classes, std::uint64_t seed) {
    Rng rng(seed);
    return std::uniform_int_distribution<std::size_t>(0, num_classes - 1)(rng);
}

FusedFeature fuse_selected(const Scenario& sc, std::span<const std::size_t> sensors, const DimSet& dims,
                           const FusionWeights& weights) {
    std::vector<std::vector<double>> pruned;
    pruned.reserve(sensors.size());
    for (std::size_t m : sensors) {
        pruned.push_back(prune(sc.features.row(m), dims));
    }
    return fuse(pruned, weights, dims);
}

std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) {
        out.push_back(values[i]);
    }
    return out;
}

bool fits(std::span<const double> rates, std::span<const std::size_t> idx, std::size_t features,
          const CommConfig& comm) {
    for (std::size_t i : idx) {
        if (!(rates[i] > 0.0)) {
            return false;
        }
    }
    return check_budget(gather(rates, idx), features, comm).feasible;
}

double binomial_se(double p, std::size_t n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

Environment prepare_environment(const ExperimentConfig& config) {
    config.validate();
    GmModel model = build_model(config.model, derive_seed(config.seed, {kModelStream}));
    MatchingModel matching = MatchingModel::truncation(config.key_dim, config.model.feature_dim);
    CalibrationStats calib = calibrate(model, matching, config.prior_relevance, config.calibration_samples,
                                       config.query_noise_factor, derive_seed(config.seed, {kCalibStream}));
    return Environment{std::move(model), std::move(matching), calib};
}

PointSetting point_setting(const ExperimentConfig& config, double sweep_value) {
    PointSetting p;
    p.prior_relevance = config.prior_relevance;
    p.num_sensors = config.num_sensors;
    double snr_db = config.mean_rx_snr_db;
    switch (config.sweep_axis) {
        case SweepAxis::SnrDb: snr_db = sweep_value; break;
        case SweepAxis::PriorRelevance: p.prior_relevance = sweep_value; break;
        case SweepAxis::NumSensors: p.num_sensors = static_cast<std::size_t>(sweep_value); break;
    }
    p.comm = config.comm.with_mean_rx_snr(db_to_linear(snr_db));
    return p;
}

std::vector<TrialOutcome> run_trials(const Environment& env, const ExperimentConfig& config,
                                     std::span<const SchemeSpec> schemes, std::size_t sweep_index,
                                     std::size_t trial_index) {
    if (sweep_index >= config.sweep_values.size()) {
        throw std::out_of_range("run_trials: sweep index out of range");
    }
    const double sweep_value = config.sweep_values[sweep_index];
    const PointSetting ps = point_setting(config, sweep_value);
    const GmModel& model = env.model;

    const Scenario sc = sample_scenario(model, ps.num_sensors, ps.prior_relevance, config.query_noise_factor,
                                        derive_seed(config.seed, {kScenarioStream, sweep_index, trial_index}));
    const auto scores = scores_for(env, sc);
    const ChannelRealization ch =
        sample_channels(ps.num_sensors, ps.comm, derive_seed(config.seed, {kChannelStream, sweep_index, trial_index}));

    SelectionContext ctx;
    ctx.model = &model;
    ctx.calib = env.calib.with_prior(ps.prior_relevance);
    ctx.comm = ps.comm;
    ctx.temperature = config.temperature;
    ctx.dims_seed = derive_seed(config.seed, {kDimsStream, sweep_index, trial_index});

    std::vector<TrialOutcome> out;
    out.reserve(schemes.size());
    for (const SchemeSpec& spec : schemes) {
        SelectionDecision decision;
        try {
            decision = run_scheme(spec.scheme, spec.ordering, scores, ch.rates, ctx, config.best_channel_k);
        } catch (const InfeasibleSelection&) {
            decision = SelectionDecision{};
        }

        TrialOutcome o;
        o.trial = trial_index;
        o.scheme = spec.scheme;
        o.ordering = spec.ordering;
        o.sweep_value = sweep_value;
        o.true_class = sc.true_class;

        if (decision.empty()) {
            o.fallback = true;
            o.predicted_class = uniform_guess(
                model.num_classes(), derive_seed(config.seed, {kGuessStream, sweep_index, trial_index,
                                                               static_cast<std::uint64_t>(spec.scheme),
                                                               static_cast<std::uint64_t>(spec.ordering)}));
        } else {
            if (!check_budget(gather(ch.rates, decision.sensors), decision.num_features, ps.comm).feasible) {
                throw InvariantError("run_trial: executed decision exceeds the slot budget");
            }
            const auto selected_scores = gather(scores, decision.sensors);
            const FusionWeights weights = decision.fusion == FusionMode::Average
                                              ? uniform_weights(decision.sensors.size())
                                              : softmax_weights(selected_scores, config.temperature);
            const FusedFeature fused = fuse_selected(sc, decision.sensors, decision.feature_dims, weights);
            o.predicted_class = classify_linear(model, fused);

            std::vector<bool> relevance;
            relevance.reserve(decision.sensors.size());
            for (std::size_t m : decision.sensors) {
                relevance.push_back(sc.relevance[m]);
                o.pi_hat.push_back(posterior_estimate(ctx.calib, scores[m]));
            }
            const RhoEta re = rho_eta(weights, relevance);
            o.rho = re.rho;
            o.eta = re.eta;
            o.num_selected = decision.sensors.size();
            o.num_features = decision.num_features;
            o.objective = decision.objective ? *decision.objective : decision_objective(decision, scores, ctx);
        }
        o.correct = o.predicted_class == o.true_class;
        out.push_back(std::move(o));
    }
    return out;
}

TrialOutcome run_trial(const Environment& env, const ExperimentConfig& config, SchemeSpec scheme,
                       std::size_t sweep_index, std::size_t trial_index) {
    return run_trials(env, config, std::span<const SchemeSpec>(&scheme, 1), sweep_index, trial_index).front();
}

std::vector<SweepRow> sweep(const Environment& env, const ExperimentConfig& config, Ordering ordering) {
    std::vector<SchemeSpec> specs;
    for (Scheme s : config.schemes) {
        specs.push_back({s, ordering});
    }
    const std::size_t num_points = config.sweep_values.size();
    struct Acc {
        std::size_t correct = 0;
        double sensors = 0.0;
        double features = 0.0;
        double objective = 0.0;
    };
    std::vector<Acc> acc(specs.size() * num_points);
    for (std::size_t p = 0; p < num_points; ++p) {
        for (std::size_t t = 0; t < config.trials; ++t) {
            const auto outcomes = run_trials(env, config, specs, p, t);
            for (std::size_t s = 0; s < specs.size(); ++s) {
                Acc& a = acc[s * num_points + p];
                const TrialOutcome& o = outcomes[s];
                a.correct += o.correct ? 1 : 0;
                a.sensors += static_cast<double>(o.num_selected);
                a.features += static_cast<double>(o.num_features);
                a.objective += o.objective;
            }
        }
    }
    std::vector<SweepRow> rows;
    rows.reserve(acc.size());
    const double n = static_cast<double>(config.trials);
    for (std::size_t s = 0; s < specs.size(); ++s) {
        for (std::size_t p = 0; p < num_points; ++p) {
            const Acc& a = acc[s * num_points + p];
            SweepRow r;
            r.axis = config.sweep_axis;
            r.sweep_value = config.sweep_values[p];
            r.scheme = specs[s].scheme;
            r.ordering = ordering;
            r.trials = config.trials;
            r.accuracy = static_cast<double>(a.correct) / n;
            r.std_err = binomial_se(r.accuracy, config.trials);
            r.mean_num_sensors = a.sensors / n;
            r.mean_num_features = a.features / n;
            r.mean_objective = a.objective / n;
            rows.push_back(r);
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "sweep_axis,sweep_value,scheme,trials,accuracy,std_err,mean_num_sensors,mean_num_features,"
           "mean_objective\n";
    for (const SweepRow& r : rows) {
        out << sweep_axis_name(r.axis) << ',' << format_double(r.sweep_value) << ',' << scheme_name(r.scheme) << ','
            << r.trials << ',' << format_double(r.accuracy) << ',' << format_double(r.std_err) << ','
            << format_double(r.mean_num_sensors) << ',' << format_double(r.mean_num_features) << ','
            << format_double(r.mean_objective) << '\n';
    }
}

std::vector<BoundRow> validate_bound(const Environment& env, const ExperimentConfig& config, Ordering ordering) {
    const GmModel& model = env.model;
    const std::size_t num_sensors = config.num_sensors;
    const std::size_t dim = model.feature_dim();
    const CommConfig comm = config.comm.with_mean_rx_snr(db_to_linear(config.mean_rx_snr_db));
    const CalibrationStats calib = env.calib.with_prior(config.prior_relevance);

    std::vector<std::size_t> correct(num_sensors + 1, 0);
    std::vector<double> theory(num_sensors + 1, 0.0);

    // Ranking: non-negative margins by priority, then negative margins by margin.
    auto ranking = [&](std::span<const double> psi, std::span<const double> rates) {
        auto order = priority_order(psi, rates);
        std::vector<std::size_t> rest;
        for (std::size_t m = 0; m < psi.size(); ++m) {
            if (std::find(order.begin(), order.end(), m) == order.end()) {
                rest.push_back(m);
            }
        }
        std::stable_sort(rest.begin(), rest.end(), [&psi](std::size_t a, std::size_t b) { return psi[a] > psi[b]; });
        order.insert(order.end(), rest.begin(), rest.end());
        return order;
    };

    for (std::size_t t = 0; t < config.bound_trials; ++t) {
        const Scenario sc = sample_scenario(model, num_sensors, config.prior_relevance, config.query_noise_factor,
                                            derive_seed(config.seed, {kBoundScenario, t}));
        const auto scores = scores_for(env, sc);
        const auto ch = sample_channels(num_sensors, comm, derive_seed(config.seed, {kBoundChannel, t}));
        std::vector<double> pi_hat(num_sensors);
        for (std::size_t m = 0; m < num_sensors; ++m) {
            pi_hat[m] = posterior_estimate(calib, scores[m]);
        }

        std::vector<std::vector<std::size_t>> rank_by_count;  // importance: ranking per feature count
        std::vector<double> psi_full;
        std::vector<std::size_t> rank_full;
        if (ordering == Ordering::Random) {
            psi_full = margin_profile(pi_hat, model.g_min(), model.delta_max()).psi;
            rank_full = ranking(psi_full, ch.rates);
        } else {
            rank_by_count.resize(dim + 1);
            for (std::size_t k = 1; k <= dim; ++k) {
                rank_by_count[k] =
                    ranking(margin_profile(pi_hat, model.g_min_top(k), model.delta_max_top(k)).psi, ch.rates);
            }
        }
        const std::uint64_t dims_seed = derive_seed(config.seed, {kBoundDims, t});

        for (std::size_t k = 1; k <= num_sensors; ++k) {
            std::vector<std::size_t> sel;
            std::size_t features = 0;
            if (ordering == Ordering::Random) {
                sel.assign(rank_full.begin(), rank_full.begin() + static_cast<std::ptrdiff_t>(k));
                bool outage = false;
                for (std::size_t m : sel) {
                    outage = outage || !(ch.rates[m] > 0.0);
                }
                features = outage ? 0 : max_feature_count(gather(ch.rates, sel), comm, dim);
            } else {
                for (std::size_t f = dim; f >= 1; --f) {
                    std::span<const std::size_t> top(rank_by_count[f].data(), k);
                    if (fits(ch.rates, top, f, comm)) {
                        sel.assign(top.begin(), top.end());
                        features = f;
                        break;
                    }
                }
            }
            if (features == 0) {
                const std::size_t guess =
                    uniform_guess(model.num_classes(), derive_seed(config.seed, {kBoundGuess, t, k}));
                correct[k] += guess == sc.true_class ? 1 : 0;
                theory[k] += 1.0 / static_cast<double>(model.num_classes());
                continue;
            }
            const DimSet dims =
                ordering == Ordering::Importance ? model.top_dims(features) : random_dims(features, dim, dims_seed);
            const auto sel_scores = gather(scores, sel);
            const FusionWeights w = softmax_weights(sel_scores, config.temperature);
            const FusedFeature fused = fuse_selected(sc, sel, dims, w);
            correct[k] += classify_linear(model, fused) == sc.true_class ? 1 : 0;

            const auto psi = ordering == Ordering::Importance
                                 ? margin_profile(gather(pi_hat, sel), model.g_min_top(features),
                                                  model.delta_max_top(features))
                                       .psi
                                 : gather(psi_full, sel);
            theory[k] +=
                surrogate(w.exp_scores, psi, ordering, features, dim, model.num_classes()).accuracy_lb;
        }
    }

    std::vector<BoundRow> rows;
    const double n = static_cast<double>(config.bound_trials);
    for (std::size_t k = 1; k <= num_sensors; ++k) {
        BoundRow r;
        r.ordering = ordering;
        r.k = k;
        r.empirical_acc = static_cast<double>(correct[k]) / n;
        r.empirical_se = binomial_se(r.empirical_acc, config.bound_trials);
        r.theory_lb = theory[k] / n;
        rows.push_back(r);
    }
    return rows;
}

void write_bound_csv(std::ostream& out, std::span<const BoundRow> rows) {
    out << "ordering,k,empirical_acc,empirical_se,theory_lb\n";
    for (const BoundRow& r : rows) {
        out << ordering_name(r.ordering) << ',' << r.k << ',' << format_double(r.empirical_acc) << ','
            << format_double(r.empirical_se) << ',' << format_double(r.theory_lb) << '\n';
    }
}

std::pair<std::size_t, std::size_t> bound_argmax(std::span<const BoundRow> rows) {
    if (rows.empty()) {
        throw std::invalid_argument("bound_argmax: no rows");
    }
    const BoundRow* best_theory = &rows[0];
    const BoundRow* best_emp = &rows[0];
    for (const BoundRow& r : rows) {
        if (r.theory_lb > best_theory->theory_lb) best_theory = &r;
        if (r.empirical_acc > best_emp->empirical_acc) best_emp = &r;
    }
    return {best_theory->k, best_emp->k};
}

double enumerate_expected_accuracy(const GmModel& model, const CalibrationStats& calib,
                                   std::span<const double> scores, std::span<const std::size_t> selection,
                                   std::size_t num_features, Ordering ordering, double temperature) {
    if (selection.empty()) {
        throw std::invalid_argument("enumerate_expected_accuracy: empty selection");
    }
    if (selection.size() > 15) {
        throw std::invalid_argument("enumerate_expected_accuracy: selection larger than 15 sensors");
    }
    const std::size_t dim = model.feature_dim();
    if (num_features < 1 || num_features > dim) {
        throw std::invalid_argument("enumerate_expected_accuracy: feature count out of range");
    }
    double g_min = 0.0;
    double delta_max = 0.0;
    if (ordering == Ordering::Importance) {
        g_min = model.g_min_top(num_features);
        delta_max = model.delta_max_top(num_features);
    } else {
        const double beta = static_cast<double>(num_features) / static_cast<double>(dim);
        g_min = beta * model.g_min();
        delta_max = std::sqrt(beta) * model.delta_max();
    }
    const auto sel_scores = gather(scores, selection);
    const FusionWeights w = softmax_weights(sel_scores, temperature);
    double eta = 0.0;
    for (double x : w.weights) {
        eta += x * x;
    }
    std::vector<double> pi_hat;
    for (double s : sel_scores) {
        pi_hat.push_back(posterior_estimate(calib, s));
    }

    const std::size_t n = selection.size();
    double expectation = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double prob = 1.0;
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                prob *= pi_hat[i];
                rho += w.weights[i];
            } else {
                prob *= 1.0 - pi_hat[i];
            }
        }
        if (prob == 0.0) {
            continue;
        }
        expectation += prob * conditional_accuracy_lb(g_min, delta_max, rho, eta, model.num_classes());
    }
    return expectation;
}

std::vector<OracleGapRow> oracle_gap(const Environment& env, const ExperimentConfig& config, Ordering ordering) {
    const GmModel& model = env.model;
    const std::size_t num_sensors = config.num_sensors;
    double lo = config.mean_rx_snr_db;
    double hi = config.mean_rx_snr_db;
    if (config.sweep_axis == SweepAxis::SnrDb) {
        lo = *std::min_element(config.sweep_values.begin(), config.sweep_values.end());
        hi = *std::max_element(config.sweep_values.begin(), config.sweep_values.end());
    }
    std::vector<OracleGapRow> rows;
    rows.reserve(config.oracle_instances);
    for (std::size_t i = 0; i < config.oracle_instances; ++i) {
        Rng snr_rng(derive_seed(config.seed, {kOracleSnr, i}));
        const double snr_db = lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(snr_rng);
        const CommConfig comm = config.comm.with_mean_rx_snr(db_to_linear(snr_db));
        const Scenario sc = sample_scenario(model, num_sensors, config.prior_relevance, config.query_noise_factor,
                                            derive_seed(config.seed, {kOracleScenario, i}));
        const auto scores = scores_for(env, sc);
        const auto ch = sample_channels(num_sensors, comm, derive_seed(config.seed, {kOracleChannel, i}));

        SelectionContext ctx;
        ctx.model = &model;
        ctx.calib = env.calib.with_prior(config.prior_relevance);
        ctx.comm = comm;
        ctx.temperature = config.temperature;
        ctx.dims_seed = 0;

        const auto heuristic = ordering == Ordering::Random ? select_random_ordering(scores, ch.rates, ctx)
                                                            : select_importance_ordering(scores, ch.rates, ctx);
        const auto oracle = exhaustive_select(scores, ch.rates, ordering, ctx, std::max<std::size_t>(12, num_sensors));

        OracleGapRow r;
        r.ordering = ordering;
        r.instance = i;
        r.snr_db = snr_db;
        r.heuristic_objective = heuristic.objective.value_or(0.0);
        r.oracle_objective = oracle.objective.value_or(0.0);
        r.gap = r.oracle_objective > 0.0 ? (r.oracle_objective - r.heuristic_objective) / r.oracle_objective : 0.0;
        rows.push_back(r);
    }
    return rows;
}

void write_oracle_gap_csv(std::ostream& out, std::span<const OracleGapRow> rows) {
    out << "ordering,instance,snr_db,heuristic_objective,oracle_objective,gap\n";
    for (const OracleGapRow& r : rows) {
        out << ordering_name(r.ordering) << ',' << r.instance << ',' << format_double(r.snr_db) << ','
            << format_double(r.heuristic_objective) << ',' << format_double(r.oracle_objective) << ','
            << format_double(r.gap) << '\n';
    }
}

double gap_quantile(std::span<const OracleGapRow> rows, double q) {
    if (rows.empty()) {
        throw std::invalid_argument("gap_quantile: no rows");
    }
    std::vector<double> gaps;
    gaps.reserve(rows.size());
    for (const auto& r : rows) {
        gaps.push_back(r.gap);
    }
    std::sort(gaps.begin(), gaps.end());
    const double pos = q * static_cast<double>(gaps.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, gaps.size() - 1);
    return gaps[lo] + (pos - static_cast<double>(lo)) * (gaps[hi] - gaps[lo]);
}

void write_metadata(std::ostream& out, const ExperimentConfig& config, const Environment& env,
                    const std::string& command) {
    // Derived values are comments so the sidecar itself is a loadable config.
    out << "# command=" << command << '\n';
    write_config(out, config);
    out << "# model_seed=" << derive_seed(config.seed, {kModelStream}) << '\n'
        << "# calibration_seed=" << derive_seed(config.seed, {kCalibStream}) << '\n'
        << "# g_min=" << format_double(env.model.g_min()) << '\n'
        << "# delta_max=" << format_double(env.model.delta_max()) << '\n'
        << "# alpha_bar=" << format_double(env.calib.alpha_bar) << '\n'
        << "# phi_bar=" << format_double(env.calib.phi_bar) << '\n'
        << "# sigma2_bar=" << format_double(env.calib.sigma2_bar) << '\n'
        << "# query_effective=" << (env.calib.query_effective() ? "true" : "false") << '\n';
}

}  // namespace semsel
