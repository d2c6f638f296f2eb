#ifndef SEMSEL_ACCURACY_HPP
#define SEMSEL_ACCURACY_HPP

#include <span>
#include <vector>

namespace semsel {

/// How the uploaded feature dimensions are chosen for a given count.
enum class Ordering { Random, Importance };

/// Softmax attention weights over a selected sensor set.
///
/// `exp_scores` holds exp((phi_m - phi_max) / tau): the textbook exp(phi_m / tau)
/// rescaled by a common positive factor, which leaves both the weights and the
/// surrogate objective unchanged while avoiding overflow.
struct FusionWeights {
    std::vector<double> weights;
    std::vector<double> exp_scores;
    double temperature = 1.0;
};

FusionWeights softmax_weights(std::span<const double> scores, double temperature);
/// Equal weights, as used by plain average pooling.
FusionWeights uniform_weights(std::size_t count);

struct RhoEta {
    double rho = 0.0;  // weight carried by relevant sensors
    double eta = 1.0;  // sum of squared weights
};

RhoEta rho_eta(const FusionWeights& weights, const std::vector<bool>& relevance);

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double tail_q(double x);

/// Lower bound on accuracy conditioned on relevance (may be negative).
double conditional_accuracy_lb(double g_min, double delta_max, double rho, double eta, std::size_t num_classes);

/// Expected classification margin of one sensor.
double expected_margin(double pi_hat, double g_min, double delta_max);

struct MarginProfile {
    std::vector<double> psi;
    double g_min = 0.0;
    double delta_max = 0.0;
    std::vector<double> pi_hat;
};

MarginProfile margin_profile(std::span<const double> pi_hat, double g_min, double delta_max);

struct SurrogateValue {
    double objective = 0.0;    // F
    double accuracy_lb = 0.0;  // 1 - (L-1) Q(F)
};

/// Expected-accuracy surrogate for a selection. `psi` must be built from the
/// full-dimension statistics for random ordering and from the top-`num_features`
/// statistics for importance ordering.
SurrogateValue surrogate(std::span<const double> exp_scores, std::span<const double> psi, Ordering ordering,
                         std::size_t num_features, std::size_t feature_dim, std::size_t num_classes);

/// 1 - (L-1) Q(F).
double accuracy_from_objective(double objective, std::size_t num_classes);

}  // namespace semsel

#endif  // SEMSEL_ACCURACY_HPP
