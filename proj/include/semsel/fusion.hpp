#ifndef SEMSEL_FUSION_HPP
#define SEMSEL_FUSION_HPP

#include <span>
#include <vector>

#include "semsel/accuracy.hpp"
#include "semsel/common.hpp"
#include "semsel/gm_model.hpp"

namespace semsel {

struct FusedFeature {
    std::vector<double> values;
    DimSet dims;
};

/// Restricts `feature` to `dims` (ascending), preserving order.
std::vector<double> prune(std::span<const double> feature, std::span<const std::size_t> dims);

/// Convex combination of pruned per-sensor features sharing `dims`.
FusedFeature fuse(const std::vector<std::vector<double>>& pruned, const FusionWeights& weights,
                  std::span<const std::size_t> dims);

/// Nearest centroid in the Mahalanobis metric over `fused.dims`; ties go to the smallest class.
std::size_t classify_linear(const GmModel& model, const FusedFeature& fused);

/// Squared Mahalanobis distance from `fused` to the centroid of `cls`.
double squared_distance(const GmModel& model, const FusedFeature& fused, std::size_t cls);

}  // namespace semsel

#endif  // SEMSEL_FUSION_HPP
