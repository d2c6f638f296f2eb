#include "semsel/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semsel {

FusionWeights softmax_weights(std::span<const double> scores, double temperature) {
    if (scores.empty()) {
        throw std::invalid_argument("softmax_weights: no scores");
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("softmax_weights: temperature must be positive");
    }
    const double peak = *std::max_element(scores.begin(), scores.end());
    FusionWeights fw;
    fw.temperature = temperature;
    fw.exp_scores.reserve(scores.size());
    double total = 0.0;
    for (double s : scores) {
        fw.exp_scores.push_back(std::exp((s - peak) / temperature));
        total += fw.exp_scores.back();
    }
    fw.weights.reserve(scores.size());
    for (double e : fw.exp_scores) {
        fw.weights.push_back(e / total);
    }
    return fw;
}

FusionWeights uniform_weights(std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("uniform_weights: no sensors");
    }
    FusionWeights fw;
    fw.temperature = HUGE_VAL;
    fw.exp_scores.assign(count, 1.0);
    fw.weights.assign(count, 1.0 / static_cast<double>(count));
    return fw;
}

RhoEta rho_eta(const FusionWeights& weights, const std::vector<bool>& relevance) {
    if (weights.weights.size() != relevance.size()) {
        throw std::invalid_argument("rho_eta: weights and relevance lengths differ");
    }
    RhoEta out{0.0, 0.0};
    for (std::size_t i = 0; i < relevance.size(); ++i) {
        const double w = weights.weights[i];
        if (relevance[i]) {
            out.rho += w;
        }
        out.eta += w * w;
    }
    return out;
}

double tail_q(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double conditional_accuracy_lb(double g_min, double delta_max, double rho, double eta, std::size_t num_classes) {
    if (!(eta > 0.0)) {
        throw std::invalid_argument("conditional_accuracy_lb: eta must be positive");
    }
    if (g_min < 0.0 || delta_max < 0.0) {
        throw std::invalid_argument("conditional_accuracy_lb: negative separability statistics");
    }
    const double margin = 0.5 * std::sqrt(g_min) - 2.0 * (1.0 - rho) * delta_max;
    return 1.0 - static_cast<double>(num_classes - 1) * tail_q(margin / std::sqrt(eta));
}

double expected_margin(double pi_hat, double g_min, double delta_max) {
    return 0.5 * std::sqrt(g_min) - 2.0 * delta_max * (1.0 - pi_hat);
}

MarginProfile margin_profile(std::span<const double> pi_hat, double g_min, double delta_max) {
    MarginProfile p;
    p.g_min = g_min;
    p.delta_max = delta_max;
    p.pi_hat.assign(pi_hat.begin(), pi_hat.end());
    p.psi.reserve(pi_hat.size());
    for (double pi : pi_hat) {
        p.psi.push_back(expected_margin(pi, g_min, delta_max));
    }
    return p;
}

SurrogateValue surrogate(std::span<const double> exp_scores, std::span<const double> psi, Ordering ordering,
                         std::size_t num_features, std::size_t feature_dim, std::size_t num_classes) {
    if (exp_scores.empty()) {
        throw std::invalid_argument("surrogate: empty selection");
    }
    if (exp_scores.size() != psi.size()) {
        throw std::invalid_argument("surrogate: exp_scores and psi lengths differ");
    }
    if (num_features < 1 || num_features > feature_dim) {
        throw std::invalid_argument("surrogate: feature count out of range");
    }
    double weighted = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        weighted += exp_scores[i] * psi[i];
        energy += exp_scores[i] * exp_scores[i];
    }
    if (!(energy > 0.0)) {
        throw std::invalid_argument("surrogate: all exponential scores vanish");
    }
    double objective = weighted / std::sqrt(energy);
    if (ordering == Ordering::Random) {
        objective *= std::sqrt(static_cast<double>(num_features) / static_cast<double>(feature_dim));
    }
    return {objective, accuracy_from_objective(objective, num_classes)};
}

double accuracy_from_objective(double objective, std::size_t num_classes) {
    return 1.0 - static_cast<double>(num_classes - 1) * tail_q(objective);
}

}  // namespace semsel
