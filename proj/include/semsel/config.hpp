#ifndef SEMSEL_CONFIG_HPP
#define SEMSEL_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "semsel/accuracy.hpp"
#include "semsel/channel.hpp"
#include "semsel/gm_model.hpp"
#include "semsel/selection.hpp"

namespace semsel {

enum class SweepAxis { SnrDb, PriorRelevance, NumSensors };

std::string_view sweep_axis_name(SweepAxis axis);

struct ExperimentConfig {
    ModelParams model{40, 100, 12.0, 0.01, 1.0};
    std::size_t num_sensors = 12;
    double prior_relevance = 0.4;
    double query_noise_factor = 3.0;
    std::size_t key_dim = 30;
    double temperature = 1.0;

    CommConfig comm;
    double mean_rx_snr_db = 0.0;  // used when SNR is not the sweep axis

    std::vector<Scheme> schemes{Scheme::ProposedRandom, Scheme::ProposedImportance, Scheme::When2com,
                                Scheme::BestChannel,    Scheme::AllAttentive,       Scheme::AllAverage};
    std::vector<Ordering> orderings{Ordering::Random, Ordering::Importance};
    std::size_t best_channel_k = 4;

    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    SweepAxis sweep_axis = SweepAxis::SnrDb;
    std::vector<double> sweep_values{-20, -15, -10, -5, 0, 5, 10, 15, 20};
    std::size_t calibration_samples = 100000;
    std::size_t bound_trials = 20000;
    std::size_t oracle_instances = 200;

    /// Throws ConfigError describing the first violated invariant.
    void validate() const;
};

/// Flat `key = value` file: '#' starts a comment, lists are comma-separated.
/// Unknown keys and malformed lines raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Every field as `key=value`, in a fixed order; parse_config reads it back.
void write_config(std::ostream& out, const ExperimentConfig& config);

}  // namespace semsel

#endif  // SEMSEL_CONFIG_HPP
