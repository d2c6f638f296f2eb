#ifndef SEMSEL_GM_MODEL_HPP
#define SEMSEL_GM_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "semsel/common.hpp"

namespace semsel {

/// Parameters of the synthetic Gaussian-mixture task.
struct ModelParams {
    std::size_t num_classes = 40;
    std::size_t feature_dim = 100;
    double centroid_radius = 3.0;
    double cov_low = 0.01;
    double cov_high = 1.0;
};

/// Gaussian mixture with class centroids and a shared diagonal covariance.
///
/// Besides the raw statistics the model carries per-dimension importance
/// (average discriminant gain over all class pairs), the importance order,
/// and the minimum pairwise discriminant gain / maximum Mahalanobis norm
/// restricted to every importance-ordered prefix. The prefix tables make
/// `g_min_top(k)` and `delta_max_top(k)` O(1).
///
/// Classes and dimensions are zero-based. Immutable after construction.
class GmModel {
public:
    /// Validates the statistics and derives the importance tables.
    /// Throws std::invalid_argument on shape mismatch, non-positive
    /// covariance, fewer than two classes, or two coincident centroids.
    GmModel(Matrix centroids, std::vector<double> cov_diag);

    std::size_t num_classes() const noexcept { return centroids_.rows(); }
    std::size_t feature_dim() const noexcept { return centroids_.cols(); }

    const Matrix& centroids() const noexcept { return centroids_; }
    std::span<const double> centroid(std::size_t cls) const { return centroids_.row(cls); }
    std::span<const double> cov_diag() const noexcept { return cov_diag_; }

    /// Average discriminant gain of each dimension.
    std::span<const double> importance() const noexcept { return importance_; }
    /// Dimensions sorted by descending importance, ties by ascending index.
    std::span<const std::size_t> importance_order() const noexcept { return importance_order_; }

    /// Minimum over class pairs of the discriminant gain restricted to `dims`.
    double min_pairwise_dg(std::span<const std::size_t> dims) const;
    /// Maximum over classes of the Mahalanobis norm restricted to `dims`.
    double max_mahalanobis_norm(std::span<const std::size_t> dims) const;

    /// Minimum pairwise DG on the `k` most important dimensions, 1 <= k <= D.
    double g_min_top(std::size_t k) const;
    /// Maximum Mahalanobis norm on the `k` most important dimensions.
    double delta_max_top(std::size_t k) const;

    double g_min() const { return g_min_top(feature_dim()); }
    double delta_max() const { return delta_max_top(feature_dim()); }

    /// The `k` most important dimensions, sorted ascending.
    DimSet top_dims(std::size_t k) const;

    bool operator==(const GmModel& other) const {
        return centroids_ == other.centroids_ && cov_diag_ == other.cov_diag_;
    }

private:
    Matrix centroids_;
    std::vector<double> cov_diag_;
    std::vector<double> importance_;
    std::vector<std::size_t> importance_order_;
    std::vector<double> g_min_prefix_;      // index k: first k important dims
    std::vector<double> delta_max_prefix_;  // index k: first k important dims
};

/// Draws centroids uniformly in the D-ball of `centroid_radius` and
/// covariance entries uniformly in [cov_low, cov_high]. Deterministic in seed.
GmModel build_model(const ModelParams& params, std::uint64_t seed);

/// One sensing instance.
struct Scenario {
    std::size_t true_class = 0;
    std::vector<bool> relevance;
    std::vector<std::size_t> observed_class;
    Matrix features;                     // one row per sensor
    std::vector<double> query_feature;   // corrupted view of the target
};

/// Samples the target class, per-sensor relevance and observed classes,
/// the sensor features, and a query corrupted with `query_noise_factor`
/// times the observation covariance.
Scenario sample_scenario(const GmModel& model, std::size_t num_sensors, double prior_relevance,
                         double query_noise_factor, std::uint64_t seed);

/// Flat text artifact: "L D", then L centroid rows, then the covariance row.
/// Values use shortest round-trip decimal form.
void write_model(std::ostream& out, const GmModel& model);
GmModel read_model(std::istream& in);

}  // namespace semsel

#endif  // SEMSEL_GM_MODEL_HPP
