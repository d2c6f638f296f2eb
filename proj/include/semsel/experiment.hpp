#ifndef SEMSEL_EXPERIMENT_HPP
#define SEMSEL_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semsel/config.hpp"
#include "semsel/gm_model.hpp"
#include "semsel/matching.hpp"
#include "semsel/selection.hpp"

namespace semsel {

/// Model, encoders and calibration shared by every trial of a run.
struct Environment {
    GmModel model;
    MatchingModel matching;
    CalibrationStats calib;
};

/// Builds the model and calibrates once, with seeds derived from config.seed.
Environment prepare_environment(const ExperimentConfig& config);

/// Concrete parameters of one sweep point.
struct PointSetting {
    double prior_relevance = 0.4;
    std::size_t num_sensors = 12;
    CommConfig comm;
};

PointSetting point_setting(const ExperimentConfig& config, double sweep_value);

struct TrialOutcome {
    std::size_t trial = 0;
    Scheme scheme = Scheme::ProposedRandom;
    Ordering ordering = Ordering::Random;
    double sweep_value = 0.0;
    std::size_t num_selected = 0;
    std::size_t num_features = 0;
    double objective = 0.0;  // surrogate F of the executed decision, 0 when empty
    std::size_t true_class = 0;
    std::size_t predicted_class = 0;
    bool correct = false;
    bool fallback = false;  // empty or infeasible decision: uniform guess
    double rho = 0.0;
    double eta = 0.0;
    std::vector<double> pi_hat;  // per selected sensor
};

struct SchemeSpec {
    Scheme scheme;
    Ordering ordering;  // feature ordering used by benchmark schemes
};

/// Runs one trial for several schemes on a shared scenario and channel draw.
std::vector<TrialOutcome> run_trials(const Environment& env, const ExperimentConfig& config,
                                     std::span<const SchemeSpec> schemes, std::size_t sweep_index,
                                     std::size_t trial_index);

/// Single-scheme convenience wrapper around run_trials.
TrialOutcome run_trial(const Environment& env, const ExperimentConfig& config, SchemeSpec scheme,
                       std::size_t sweep_index, std::size_t trial_index);

struct SweepRow {
    SweepAxis axis = SweepAxis::SnrDb;
    double sweep_value = 0.0;
    Scheme scheme = Scheme::ProposedRandom;
    Ordering ordering = Ordering::Random;
    std::size_t trials = 0;
    double accuracy = 0.0;
    double std_err = 0.0;
    double mean_num_sensors = 0.0;
    double mean_num_features = 0.0;
    double mean_objective = 0.0;
};

/// Every configured scheme at every sweep value with `ordering` for the benchmarks.
std::vector<SweepRow> sweep(const Environment& env, const ExperimentConfig& config, Ordering ordering);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

struct BoundRow {
    Ordering ordering = Ordering::Random;
    std::size_t k = 0;
    double empirical_acc = 0.0;
    double empirical_se = 0.0;
    double theory_lb = 0.0;
};

/// Empirical accuracy and surrogate bound of the top-k priority sensors, k = 1..M.
/// Uses config.bound_trials trials at mean_rx_snr_db and prior_relevance.
std::vector<BoundRow> validate_bound(const Environment& env, const ExperimentConfig& config, Ordering ordering);

void write_bound_csv(std::ostream& out, std::span<const BoundRow> rows);

/// Index of the maximum theory_lb and of the maximum empirical accuracy (k values).
std::pair<std::size_t, std::size_t> bound_argmax(std::span<const BoundRow> rows);

/// Exact expectation of the conditional bound over all 2^|S| relevance
/// patterns with independent Bernoulli(pi_hat) relevance. Random ordering
/// uses the proportional statistics (D~/D) G_min and sqrt(D~/D) delta_max.
/// Throws std::invalid_argument when |S| > 15.
double enumerate_expected_accuracy(const GmModel& model, const CalibrationStats& calib,
                                   std::span<const double> scores, std::span<const std::size_t> selection,
                                   std::size_t num_features, Ordering ordering, double temperature);

struct OracleGapRow {
    Ordering ordering = Ordering::Random;
    std::size_t instance = 0;
    double snr_db = 0.0;
    double heuristic_objective = 0.0;
    double oracle_objective = 0.0;
    double gap = 0.0;  // (oracle - heuristic) / oracle, 0 when oracle <= 0
};

/// Priority heuristic vs exhaustive oracle on config.oracle_instances random
/// instances (SNR uniform over the sweep range when the axis is SNR).
std::vector<OracleGapRow> oracle_gap(const Environment& env, const ExperimentConfig& config, Ordering ordering);

void write_oracle_gap_csv(std::ostream& out, std::span<const OracleGapRow> rows);

/// q-quantile (linear interpolation) of the gaps.
double gap_quantile(std::span<const OracleGapRow> rows, double q);

/// Run metadata: every config field plus derived values, as key=value lines.
void write_metadata(std::ostream& out, const ExperimentConfig& config, const Environment& env,
                    const std::string& command);

}  // namespace semsel

#endif  // SEMSEL_EXPERIMENT_HPP
