#include "semsel/fusion.hpp"

#include <stdexcept>

namespace semsel {

std::vector<double> prune(std::span<const double> feature, std::span<const std::size_t> dims) {
    require_dims(dims, feature.size(), "prune");
    std::vector<double> out;
    out.reserve(dims.size());
    for (std::size_t d : dims) {
        out.push_back(feature[d]);
    }
    return out;
}

FusedFeature fuse(const std::vector<std::vector<double>>& pruned, const FusionWeights& weights,
                  std::span<const std::size_t> dims) {
    if (pruned.empty() || pruned.size() != weights.weights.size()) {
        throw std::invalid_argument("fuse: need one weight per pruned feature");
    }
    FusedFeature out;
    out.dims.assign(dims.begin(), dims.end());
    out.values.assign(dims.size(), 0.0);
    for (std::size_t i = 0; i < pruned.size(); ++i) {
        if (pruned[i].size() != dims.size()) {
            throw std::invalid_argument("fuse: pruned features disagree on dimensions");
        }
        const double w = weights.weights[i];
        for (std::size_t j = 0; j < dims.size(); ++j) {
            out.values[j] += w * pruned[i][j];
        }
    }
    return out;
}

double squared_distance(const GmModel& model, const FusedFeature& fused, std::size_t cls) {
    const auto mu = model.centroid(cls);
    const auto cov = model.cov_diag();
    double z = 0.0;
    for (std::size_t j = 0; j < fused.dims.size(); ++j) {
        const std::size_t d = fused.dims[j];
        const double diff = fused.values[j] - mu[d];
        z += diff * diff / cov[d];
    }
    return z;
}

std::size_t classify_linear(const GmModel& model, const FusedFeature& fused) {
    require_dims(fused.dims, model.feature_dim(), "classify_linear");
    if (fused.values.size() != fused.dims.size()) {
        throw std::invalid_argument("classify_linear: values and dims lengths differ");
    }
    std::size_t best = 0;
    double best_z = squared_distance(model, fused, 0);
    for (std::size_t l = 1; l < model.num_classes(); ++l) {
        const double z = squared_distance(model, fused, l);
        if (z < best_z) {
            best_z = z;
            best = l;
        }
    }
    return best;
}

}  // namespace semsel
