#include "semsel/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "semsel/common.hpp"

namespace semsel {

CommConfig CommConfig::with_mean_rx_snr(double snr) const {
    if (!(snr > 0.0)) {
        throw std::invalid_argument("with_mean_rx_snr: SNR must be positive");
    }
    CommConfig c = *this;
    c.tx_power_w = snr * noise_power_w / path_loss;
    return c;
}

void CommConfig::validate() const {
    const double fields[] = {bandwidth_hz, noise_power_w, tx_power_w, path_loss, slot_duration_s, bits_per_feature};
    for (double v : fields) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("CommConfig: all fields must be positive and finite");
        }
    }
}

double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

double uplink_rate(double gain, const CommConfig& config) {
    return config.bandwidth_hz * std::log2(1.0 + config.tx_power_w * gain / config.noise_power_w);
}

ChannelRealization sample_channels(std::size_t num_sensors, const CommConfig& config, std::uint64_t seed) {
    if (num_sensors < 1) {
        throw std::invalid_argument("sample_channels: need at least one sensor");
    }
    Rng rng(seed);
    std::exponential_distribution<double> fading(1.0);
    ChannelRealization ch;
    ch.gains.reserve(num_sensors);
    ch.rates.reserve(num_sensors);
    for (std::size_t m = 0; m < num_sensors; ++m) {
        ch.gains.push_back(config.path_loss * fading(rng));
        ch.rates.push_back(uplink_rate(ch.gains.back(), config));
    }
    return ch;
}

namespace {

bool fits(std::span<const double> rates, std::size_t num_features, const CommConfig& config) {
    double total = 0.0;
    const double bits = config.bits_per_feature * static_cast<double>(num_features);
    for (double r : rates) {
        total += bits / r;
    }
    return total <= config.slot_duration_s;
}

}  // namespace

std::size_t max_feature_count(std::span<const double> selected_rates, const CommConfig& config,
                              std::size_t feature_dim) {
    if (selected_rates.empty()) {
        throw std::invalid_argument("max_feature_count: empty selection");
    }
    double inv_sum = 0.0;
    for (double r : selected_rates) {
        if (!(r > 0.0)) {
            throw std::domain_error("max_feature_count: selected sensor is in outage (zero rate)");
        }
        inv_sum += 1.0 / r;
    }
    const double estimate = config.slot_duration_s / (config.bits_per_feature * inv_sum);
    std::size_t count = 0;
    if (std::isfinite(estimate) && estimate >= 0.0) {
        count = estimate >= static_cast<double>(feature_dim) ? feature_dim
                                                              : static_cast<std::size_t>(std::floor(estimate));
    }
    // The closed form can be off by one ulp-induced step; settle on the exact predicate.
    while (count > 0 && !fits(selected_rates, count, config)) {
        --count;
    }
    while (count < feature_dim && fits(selected_rates, count + 1, config)) {
        ++count;
    }
    return count;
}

BudgetCheck check_budget(std::span<const double> selected_rates, std::size_t num_features,
                         const CommConfig& config) {
    BudgetCheck out;
    out.time_alloc.reserve(selected_rates.size());
    const double bits = config.bits_per_feature * static_cast<double>(num_features);
    for (double r : selected_rates) {
        out.time_alloc.push_back(bits / r);
        out.total_time += out.time_alloc.back();
    }
    out.feasible = out.total_time <= config.slot_duration_s;
    return out;
}

}  // namespace semsel
