#include "semsel/gm_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace semsel {

namespace {

double pair_dg(const Matrix& mu, std::span<const double> cov, std::size_t a, std::size_t b,
               std::span<const std::size_t> dims) {
    double s = 0.0;
    for (std::size_t d : dims) {
        const double diff = mu(a, d) - mu(b, d);
        s += diff * diff / cov[d];
    }
    return s;
}

}  // namespace

GmModel::GmModel(Matrix centroids, std::vector<double> cov_diag)
    : centroids_(std::move(centroids)), cov_diag_(std::move(cov_diag)) {
    const std::size_t num_cls = centroids_.rows();
    const std::size_t dim = centroids_.cols();
    if (num_cls < 2) {
        throw std::invalid_argument("GmModel: need at least two classes");
    }
    if (dim == 0 || cov_diag_.size() != dim) {
        throw std::invalid_argument("GmModel: covariance length must equal feature dimension");
    }
    for (double c : cov_diag_) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw std::invalid_argument("GmModel: covariance entries must be positive");
        }
    }

    importance_.assign(dim, 0.0);
    for (std::size_t a = 0; a < num_cls; ++a) {
        for (std::size_t b = a + 1; b < num_cls; ++b) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = centroids_(a, d) - centroids_(b, d);
                importance_[d] += diff * diff / cov_diag_[d];
            }
        }
    }
    const double num_pairs = 0.5 * static_cast<double>(num_cls * (num_cls - 1));
    for (double& g : importance_) {
        g /= num_pairs;
    }

    importance_order_.resize(dim);
    std::iota(importance_order_.begin(), importance_order_.end(), std::size_t{0});
    std::stable_sort(importance_order_.begin(), importance_order_.end(),
                     [this](std::size_t x, std::size_t y) { return importance_[x] > importance_[y]; });

    // Running sums along the importance order.
    std::vector<double> pair_sums(static_cast<std::size_t>(num_pairs), 0.0);
    std::vector<double> norm_sums(num_cls, 0.0);
    g_min_prefix_.assign(dim + 1, 0.0);
    delta_max_prefix_.assign(dim + 1, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        const std::size_t d = importance_order_[k];
        const double inv_c = 1.0 / cov_diag_[d];
        double g_min = std::numeric_limits<double>::infinity();
        std::size_t p = 0;
        for (std::size_t a = 0; a < num_cls; ++a) {
            for (std::size_t b = a + 1; b < num_cls; ++b, ++p) {
                const double diff = centroids_(a, d) - centroids_(b, d);
                pair_sums[p] += diff * diff * inv_c;
                g_min = std::min(g_min, pair_sums[p]);
            }
        }
        double norm_max = 0.0;
        for (std::size_t a = 0; a < num_cls; ++a) {
            norm_sums[a] += centroids_(a, d) * centroids_(a, d) * inv_c;
            norm_max = std::max(norm_max, norm_sums[a]);
        }
        g_min_prefix_[k + 1] = g_min;
        delta_max_prefix_[k + 1] = std::sqrt(norm_max);
    }
    if (!(g_min_prefix_[dim] > 0.0)) {
        throw std::invalid_argument("GmModel: two class centroids coincide (zero pairwise discriminant gain)");
    }
}

double GmModel::min_pairwise_dg(std::span<const std::size_t> dims) const {
    require_dims(dims, feature_dim(), "min_pairwise_dg");
    double g_min = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < num_classes(); ++a) {
        for (std::size_t b = a + 1; b < num_classes(); ++b) {
            g_min = std::min(g_min, pair_dg(centroids_, cov_diag_, a, b, dims));
        }
    }
    return g_min;
}

double GmModel::max_mahalanobis_norm(std::span<const std::size_t> dims) const {
    require_dims(dims, feature_dim(), "max_mahalanobis_norm");
    double best = 0.0;
    for (std::size_t a = 0; a < num_classes(); ++a) {
        double s = 0.0;
        for (std::size_t d : dims) {
            s += centroids_(a, d) * centroids_(a, d) / cov_diag_[d];
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double GmModel::g_min_top(std::size_t k) const {
    if (k == 0 || k > feature_dim()) {
        throw std::out_of_range("g_min_top: feature count out of range");
    }
    return g_min_prefix_[k];
}

double GmModel::delta_max_top(std::size_t k) const {
    if (k == 0 || k > feature_dim()) {
        throw std::out_of_range("delta_max_top: feature count out of range");
    }
    return delta_max_prefix_[k];
}

DimSet GmModel::top_dims(std::size_t k) const {
    if (k > feature_dim()) {
        throw std::out_of_range("top_dims: feature count out of range");
    }
    DimSet dims(importance_order_.begin(), importance_order_.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(dims.begin(), dims.end());
    return dims;
}

GmModel build_model(const ModelParams& params, std::uint64_t seed) {
    if (params.num_classes < 2) {
        throw std::invalid_argument("build_model: need at least two classes");
    }
    if (params.feature_dim < 1) {
        throw std::invalid_argument("build_model: feature dimension must be positive");
    }
    if (!(params.centroid_radius >= 0.0)) {
        throw std::invalid_argument("build_model: centroid radius must be non-negative");
    }
    if (!(params.cov_low > 0.0) || !(params.cov_high >= params.cov_low)) {
        throw std::invalid_argument("build_model: need 0 < cov_low <= cov_high");
    }

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t dim = params.feature_dim;
    Matrix mu(params.num_classes, dim);
    for (std::size_t l = 0; l < params.num_classes; ++l) {
        auto row = mu.row(l);
        double norm2 = 0.0;
        for (double& x : row) {
            x = normal(rng);
            norm2 += x * x;
        }
        // Uniform in the ball: isotropic direction, radius ~ R * U^(1/D).
        const double radius =
            params.centroid_radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
        const double scale = norm2 > 0.0 ? radius / std::sqrt(norm2) : 0.0;
        for (double& x : row) {
            x *= scale;
        }
    }

    std::vector<double> cov(dim);
    std::uniform_real_distribution<double> cov_dist(params.cov_low, params.cov_high);
    for (double& c : cov) {
        c = params.cov_low == params.cov_high ? params.cov_low : cov_dist(rng);
    }
    return GmModel(std::move(mu), std::move(cov));
}

Scenario sample_scenario(const GmModel& model, std::size_t num_sensors, double prior_relevance,
                         double query_noise_factor, std::uint64_t seed) {
    if (num_sensors < 1) {
        throw std::invalid_argument("sample_scenario: need at least one sensor");
    }
    if (!(prior_relevance > 0.0 && prior_relevance < 1.0)) {
        throw std::invalid_argument("sample_scenario: prior relevance must lie in (0, 1)");
    }
    if (!(query_noise_factor >= 0.0)) {
        throw std::invalid_argument("sample_scenario: query noise factor must be non-negative");
    }

    const std::size_t num_cls = model.num_classes();
    const std::size_t dim = model.feature_dim();
    const auto cov = model.cov_diag();

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution relevant(prior_relevance);
    std::uniform_int_distribution<std::size_t> any_class(0, num_cls - 1);
    std::uniform_int_distribution<std::size_t> other_class(0, num_cls - 2);

    Scenario sc;
    sc.true_class = any_class(rng);
    sc.relevance.resize(num_sensors);
    sc.observed_class.resize(num_sensors);
    sc.features = Matrix(num_sensors, dim);
    for (std::size_t m = 0; m < num_sensors; ++m) {
        const bool rel = relevant(rng);
        std::size_t cls = sc.true_class;
        if (!rel) {
            cls = other_class(rng);
            if (cls >= sc.true_class) {
                ++cls;
            }
        }
        sc.relevance[m] = rel;
        sc.observed_class[m] = cls;
        const auto mu = model.centroid(cls);
        auto f = sc.features.row(m);
        for (std::size_t d = 0; d < dim; ++d) {
            f[d] = mu[d] + std::sqrt(cov[d]) * normal(rng);
        }
    }

    const auto mu0 = model.centroid(sc.true_class);
    sc.query_feature.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        sc.query_feature[d] = mu0[d] + std::sqrt(query_noise_factor * cov[d]) * normal(rng);
    }
    return sc;
}

void write_model(std::ostream& out, const GmModel& model) {
    const std::size_t dim = model.feature_dim();
    out << model.num_classes() << ' ' << dim << '\n';
    for (std::size_t l = 0; l < model.num_classes(); ++l) {
        const auto row = model.centroid(l);
        for (std::size_t d = 0; d < dim; ++d) {
            out << (d ? " " : "") << format_double(row[d]);
        }
        out << '\n';
    }
    const auto cov = model.cov_diag();
    for (std::size_t d = 0; d < dim; ++d) {
        out << (d ? " " : "") << format_double(cov[d]);
    }
    out << '\n';
}

GmModel read_model(std::istream& in) {
    std::size_t num_cls = 0;
    std::size_t dim = 0;
    if (!(in >> num_cls >> dim) || num_cls == 0 || dim == 0) {
        throw ConfigError("model artifact: bad header");
    }
    auto next = [&in]() {
        std::string token;
        if (!(in >> token)) {
            throw ConfigError("model artifact: truncated");
        }
        return parse_double(token);
    };
    Matrix mu(num_cls, dim);
    for (std::size_t l = 0; l < num_cls; ++l) {
        for (std::size_t d = 0; d < dim; ++d) {
            mu(l, d) = next();
        }
    }
    std::vector<double> cov(dim);
    for (double& c : cov) {
        c = next();
    }
    std::string extra;
    if (in >> extra) {
        throw ConfigError("model artifact: trailing data");
    }
    return GmModel(std::move(mu), std::move(cov));
}

}  // namespace semsel
