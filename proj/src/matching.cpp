#include "semsel/matching.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>

namespace semsel {

MatchingModel::MatchingModel(Matrix query_encoder, Matrix key_encoder)
    : query_encoder_(std::move(query_encoder)), key_encoder_(std::move(key_encoder)) {
    if (query_encoder_.rows() == 0 || query_encoder_.rows() != key_encoder_.rows() ||
        query_encoder_.cols() != key_encoder_.cols()) {
        throw std::invalid_argument("MatchingModel: encoders must share a non-empty key_dim x D shape");
    }
    if (query_encoder_.rows() > query_encoder_.cols()) {
        throw std::invalid_argument("MatchingModel: key dimension exceeds feature dimension");
    }
}

MatchingModel MatchingModel::truncation(std::size_t key_dim, std::size_t feature_dim) {
    Matrix sel(key_dim, feature_dim);
    for (std::size_t i = 0; i < key_dim && i < feature_dim; ++i) {
        sel(i, i) = 1.0;
    }
    return MatchingModel(sel, sel);
}

std::vector<double> MatchingModel::key_projection(std::span<const double> query) const {
    if (query.size() != key_dim()) {
        throw std::invalid_argument("key_projection: query length must equal key dimension");
    }
    std::vector<double> u(feature_dim(), 0.0);
    for (std::size_t i = 0; i < key_dim(); ++i) {
        const auto row = key_encoder_.row(i);
        for (std::size_t d = 0; d < feature_dim(); ++d) {
            u[d] += query[i] * row[d];
        }
    }
    return u;
}

std::vector<double> encode_query(const MatchingModel& matching, std::span<const double> query_feature) {
    if (query_feature.size() != matching.feature_dim()) {
        throw std::invalid_argument("encode_query: feature length must equal D");
    }
    std::vector<double> q(matching.key_dim());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = dot(matching.query_encoder().row(i), query_feature);
    }
    return q;
}

double relevance_score(std::span<const double> query, std::span<const double> feature,
                       const MatchingModel& matching) {
    if (feature.size() != matching.feature_dim()) {
        throw std::invalid_argument("relevance_score: feature length must equal D");
    }
    if (query.size() != matching.key_dim()) {
        throw std::invalid_argument("relevance_score: query length must equal key dimension");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
        s += query[i] * dot(matching.key_encoder().row(i), feature);
    }
    return s;
}

namespace {

// 1 / (1 + exp(x)) without overflow.
double logistic_of_neg(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

}  // namespace

double posterior_exact(const GmModel& model, const MatchingModel& matching, std::span<const double> query,
                       std::size_t true_class, double score, double prior_relevance) {
    if (model.feature_dim() != matching.feature_dim()) {
        throw std::invalid_argument("posterior_exact: model and encoders disagree on D");
    }
    if (true_class >= model.num_classes()) {
        throw std::out_of_range("posterior_exact: class index out of range");
    }
    if (!(prior_relevance > 0.0 && prior_relevance < 1.0)) {
        throw std::invalid_argument("posterior_exact: prior must lie in (0, 1)");
    }
    const auto u = matching.key_projection(query);
    const auto cov = model.cov_diag();
    double sigma2 = 0.0;
    for (std::size_t d = 0; d < u.size(); ++d) {
        sigma2 += u[d] * u[d] * cov[d];
    }
    if (!(sigma2 > 0.0)) {
        throw std::domain_error("posterior_exact: zero score variance (uninformative query)");
    }

    const double s0 = dot(u, model.centroid(true_class));
    std::vector<double> exponents;
    exponents.reserve(model.num_classes() - 1);
    for (std::size_t l = 0; l < model.num_classes(); ++l) {
        if (l == true_class) {
            continue;
        }
        const double sl = dot(u, model.centroid(l));
        const double alpha = s0 - sl;
        const double mid = 0.5 * (s0 + sl);
        exponents.push_back(-alpha * (score - mid) / sigma2);
    }
    const double peak = *std::max_element(exponents.begin(), exponents.end());
    double acc = 0.0;
    for (double t : exponents) {
        acc += std::exp(t - peak);
    }
    const double num_other = static_cast<double>(model.num_classes() - 1);
    const double log_odds_against =
        std::log((1.0 - prior_relevance) / (prior_relevance * num_other)) + peak + std::log(acc);
    return logistic_of_neg(log_odds_against);
}

CalibrationStats calibrate(const GmModel& model, const MatchingModel& matching, double prior_relevance,
                           std::size_t n_samples, double query_noise_factor, std::uint64_t seed) {
    if (n_samples < 1000) {
        throw std::invalid_argument("calibrate: need at least 1000 samples");
    }
    if (!(prior_relevance > 0.0 && prior_relevance < 1.0)) {
        throw std::invalid_argument("calibrate: prior must lie in (0, 1)");
    }
    if (model.feature_dim() != matching.feature_dim()) {
        throw std::invalid_argument("calibrate: model and encoders disagree on D");
    }
    const std::size_t num_cls = model.num_classes();
    const std::size_t dim = model.feature_dim();
    const auto cov = model.cov_diag();

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> any_class(0, num_cls - 1);

    std::vector<double> f0(dim);
    std::vector<double> class_scores(num_cls);
    double alpha_sum = 0.0;
    double phi_sum = 0.0;
    double sigma2_sum = 0.0;
    for (std::size_t n = 0; n < n_samples; ++n) {
        const std::size_t l0 = any_class(rng);
        const auto mu0 = model.centroid(l0);
        for (std::size_t d = 0; d < dim; ++d) {
            f0[d] = mu0[d] + std::sqrt(query_noise_factor * cov[d]) * normal(rng);
        }
        const auto u = matching.key_projection(encode_query(matching, f0));
        double others = 0.0;
        for (std::size_t l = 0; l < num_cls; ++l) {
            class_scores[l] = dot(u, model.centroid(l));
            if (l != l0) {
                others += class_scores[l];
            }
        }
        others /= static_cast<double>(num_cls - 1);
        alpha_sum += class_scores[l0] - others;
        phi_sum += 0.5 * (class_scores[l0] + others);
        double s2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            s2 += u[d] * u[d] * cov[d];
        }
        sigma2_sum += s2;
    }
    const double n = static_cast<double>(n_samples);
    CalibrationStats stats;
    stats.alpha_bar = alpha_sum / n;
    stats.phi_bar = phi_sum / n;
    stats.sigma2_bar = sigma2_sum / n;
    stats.prior = prior_relevance;
    return stats;
}

double posterior_estimate(const CalibrationStats& stats, double score) {
    constexpr double kExponentClamp = 500.0;
    double exponent = -stats.alpha_bar * (score - stats.phi_bar) / stats.sigma2_bar;
    exponent = std::clamp(exponent, -kExponentClamp, kExponentClamp);
    const double prior_odds_against = (1.0 - stats.prior) / stats.prior;
    return 1.0 / (1.0 + prior_odds_against * std::exp(exponent));
}

void write_calibration(std::ostream& out, const CalibrationStats& stats) {
    out << "alpha_bar=" << format_double(stats.alpha_bar) << '\n'
        << "phi_bar=" << format_double(stats.phi_bar) << '\n'
        << "sigma2_bar=" << format_double(stats.sigma2_bar) << '\n'
        << "prior=" << format_double(stats.prior) << '\n';
}

CalibrationStats read_calibration(std::istream& in) {
    std::map<std::string, double> fields;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("calibration artifact: expected key=value, got '" + line + "'");
        }
        fields[line.substr(0, eq)] = parse_double(line.substr(eq + 1));
    }
    auto take = [&fields](const char* key) {
        const auto it = fields.find(key);
        if (it == fields.end()) {
            throw ConfigError(std::string("calibration artifact: missing ") + key);
        }
        return it->second;
    };
    CalibrationStats stats;
    stats.alpha_bar = take("alpha_bar");
    stats.phi_bar = take("phi_bar");
    stats.sigma2_bar = take("sigma2_bar");
    stats.prior = take("prior");
    if (!(stats.sigma2_bar > 0.0) || !(stats.prior > 0.0 && stats.prior < 1.0)) {
        throw ConfigError("calibration artifact: sigma2_bar must be positive and prior in (0, 1)");
    }
    return stats;
}

}  // namespace semsel
