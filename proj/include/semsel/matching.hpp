#ifndef SEMSEL_MATCHING_HPP
#define SEMSEL_MATCHING_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "semsel/common.hpp"
#include "semsel/gm_model.hpp"

namespace semsel {

/// Linear query and key encoders, both key_dim x D.
class MatchingModel {
public:
    MatchingModel(Matrix query_encoder, Matrix key_encoder);

    /// Both encoders keep the first `key_dim` feature dimensions.
    static MatchingModel truncation(std::size_t key_dim, std::size_t feature_dim);

    std::size_t key_dim() const noexcept { return query_encoder_.rows(); }
    std::size_t feature_dim() const noexcept { return query_encoder_.cols(); }
    const Matrix& query_encoder() const noexcept { return query_encoder_; }
    const Matrix& key_encoder() const noexcept { return key_encoder_; }

    /// W_k^T q: scoring any feature f against q reduces to a dot product with this vector.
    std::vector<double> key_projection(std::span<const double> query) const;

private:
    Matrix query_encoder_;
    Matrix key_encoder_;
};

std::vector<double> encode_query(const MatchingModel& matching, std::span<const double> query_feature);

/// Dot-product relevance score q^T (W_k f).
double relevance_score(std::span<const double> query, std::span<const double> feature,
                       const MatchingModel& matching);

/// Exact posterior probability that a sensor with score `score` is relevant,
/// given knowledge of the true class. Throws std::domain_error when the
/// score variance q^T W_k C W_k^T q is zero.
double posterior_exact(const GmModel& model, const MatchingModel& matching, std::span<const double> query,
                       std::size_t true_class, double score, double prior_relevance);

/// Empirical statistics behind the sigmoid posterior estimate.
struct CalibrationStats {
    double alpha_bar = 0.0;   // mean score gap between relevant and irrelevant views
    double phi_bar = 0.0;     // mean score midpoint
    double sigma2_bar = 1.0;  // mean score variance
    double prior = 0.5;       // prior probability of relevance

    /// Query effectiveness: relevant views score higher on average.
    bool query_effective() const noexcept { return alpha_bar > 0.0; }

    CalibrationStats with_prior(double p) const {
        CalibrationStats s = *this;
        s.prior = p;
        return s;
    }
};

/// Monte-Carlo estimate of the calibration statistics from `n_samples`
/// corrupted ground-truth queries (n_samples >= 1000).
CalibrationStats calibrate(const GmModel& model, const MatchingModel& matching, double prior_relevance,
                           std::size_t n_samples, double query_noise_factor, std::uint64_t seed);

/// Scaled sigmoid of the score. The exponent is clamped to +-500.
double posterior_estimate(const CalibrationStats& stats, double score);

/// Four labeled key=value lines.
void write_calibration(std::ostream& out, const CalibrationStats& stats);
CalibrationStats read_calibration(std::istream& in);

}  // namespace semsel

#endif  // SEMSEL_MATCHING_HPP
