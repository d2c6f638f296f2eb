#ifndef SEMSEL_CHANNEL_HPP
#define SEMSEL_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace semsel {

/// TDMA uplink parameters shared by all sensors.
struct CommConfig {
    double bandwidth_hz = 1e6;
    double noise_power_w = 1e-9;
    double tx_power_w = 1e-7;   // common transmit power
    double path_loss = 1e-2;    // linear gain factor (-20 dB)
    double slot_duration_s = 3.2e-3;
    double bits_per_feature = 32.0;

    /// P * path_loss / N0.
    double mean_rx_snr() const noexcept { return tx_power_w * path_loss / noise_power_w; }

    /// Copy with the transmit power chosen so that mean_rx_snr() == snr (linear).
    CommConfig with_mean_rx_snr(double snr) const;

    /// Throws std::invalid_argument unless every field is positive and finite.
    void validate() const;
};

double db_to_linear(double db);

struct ChannelRealization {
    std::vector<double> gains;  // |h_m|^2
    std::vector<double> rates;  // bits/s
};

/// Shannon rate B log2(1 + P g / N0).
double uplink_rate(double gain, const CommConfig& config);

/// i.i.d. Rayleigh block fading: |h|^2 = path_loss * Exp(1).
ChannelRealization sample_channels(std::size_t num_sensors, const CommConfig& config, std::uint64_t seed);

/// Largest feature count D~ <= feature_dim such that every sensor in the
/// selection uploads D~ features within the slot; 0 when none fit.
/// Throws std::invalid_argument on an empty selection and std::domain_error
/// when a member's rate is zero (outage).
std::size_t max_feature_count(std::span<const double> selected_rates, const CommConfig& config,
                              std::size_t feature_dim);

struct BudgetCheck {
    bool feasible = true;
    double total_time = 0.0;
    std::vector<double> time_alloc;  // per selected sensor, seconds
};

/// Per-sensor upload times Q D~ / r_m and whether their sum fits in the slot.
BudgetCheck check_budget(std::span<const double> selected_rates, std::size_t num_features,
                         const CommConfig& config);

}  // namespace semsel

#endif  // SEMSEL_CHANNEL_HPP
