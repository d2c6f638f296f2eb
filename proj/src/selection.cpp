#include "semsel/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace semsel {

namespace {

constexpr std::array<Scheme, 7> kSchemes = {
    Scheme::ProposedRandom, Scheme::ProposedImportance, Scheme::When2com,  Scheme::BestChannel,
    Scheme::AllAttentive,   Scheme::AllAverage,         Scheme::Exhaustive,
};

std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) {
        out.push_back(values[i]);
    }
    return out;
}

// exp((phi_m - max_S phi) / tau) over the subset.
std::vector<double> subset_exp_scores(std::span<const double> scores, std::span<const std::size_t> idx,
                                      double temperature) {
    double peak = -HUGE_VAL;
    for (std::size_t i : idx) {
        peak = std::max(peak, scores[i]);
    }
    std::vector<double> e;
    e.reserve(idx.size());
    for (std::size_t i : idx) {
        e.push_back(std::exp((scores[i] - peak) / temperature));
    }
    return e;
}

std::vector<double> posteriors(std::span<const double> scores, const CalibrationStats& calib) {
    std::vector<double> pi(scores.size());
    for (std::size_t m = 0; m < scores.size(); ++m) {
        pi[m] = posterior_estimate(calib, scores[m]);
    }
    return pi;
}

std::vector<double> margins(std::span<const double> pi_hat, double g_min, double delta_max) {
    std::vector<double> psi(pi_hat.size());
    for (std::size_t m = 0; m < pi_hat.size(); ++m) {
        psi[m] = expected_margin(pi_hat[m], g_min, delta_max);
    }
    return psi;
}

// Largest feature count for the subset, 0 when a member is in outage.
std::size_t feasible_count(std::span<const double> rates, std::span<const std::size_t> idx,
                           const CommConfig& comm, std::size_t feature_dim) {
    const auto sel = gather(rates, idx);
    for (double r : sel) {
        if (!(r > 0.0)) {
            return 0;
        }
    }
    return max_feature_count(sel, comm, feature_dim);
}

double objective_for(std::span<const double> scores, std::span<const std::size_t> idx, std::span<const double> psi,
                     Ordering ordering, std::size_t num_features, const SelectionContext& ctx) {
    const auto e = subset_exp_scores(scores, idx, ctx.temperature);
    const auto p = gather(psi, idx);
    const GmModel& model = *ctx.model;
    return surrogate(e, p, ordering, num_features, model.feature_dim(), model.num_classes()).objective;
}

SelectionDecision finalize(Scheme scheme, Ordering ordering, FusionMode fusion, std::vector<std::size_t> sensors,
                           std::size_t num_features, std::span<const double> rates, const SelectionContext& ctx) {
    SelectionDecision d;
    d.scheme = scheme;
    d.ordering = ordering;
    d.fusion = fusion;
    if (sensors.empty() || num_features == 0) {
        return d;
    }
    d.sensors = std::move(sensors);
    d.num_features = num_features;
    const std::size_t dim = ctx.model->feature_dim();
    d.feature_dims = ordering == Ordering::Importance ? ctx.model->top_dims(num_features)
                                                      : random_dims(num_features, dim, ctx.dims_seed);
    const auto check = check_budget(gather(rates, d.sensors), num_features, ctx.comm);
    if (!check.feasible) {
        throw InvariantError("selection: emitted decision violates the slot budget");
    }
    d.time_alloc = check.time_alloc;
    return d;
}

void require_context(const SelectionContext& ctx, std::size_t scores, std::size_t rates) {
    if (ctx.model == nullptr) {
        throw std::invalid_argument("selection: context has no model");
    }
    if (scores != rates) {
        throw std::invalid_argument("selection: scores and rates lengths differ");
    }
    if (rates == 0) {
        throw std::invalid_argument("selection: need at least one sensor");
    }
}

std::vector<std::size_t> by_descending(std::span<const double> key, std::vector<std::size_t> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&key](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return idx;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::ProposedRandom: return "proposed-random";
        case Scheme::ProposedImportance: return "proposed-importance";
        case Scheme::When2com: return "when2com";
        case Scheme::BestChannel: return "best-channel";
        case Scheme::AllAttentive: return "all-attentive";
        case Scheme::AllAverage: return "all-average";
        case Scheme::Exhaustive: return "exhaustive";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : kSchemes) {
        if (scheme_name(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::span<const Scheme> all_schemes() {
    return kSchemes;
}

std::string_view ordering_name(Ordering ordering) {
    return ordering == Ordering::Random ? "random" : "importance";
}

Ordering parse_ordering(std::string_view name) {
    if (name == "random") {
        return Ordering::Random;
    }
    if (name == "importance") {
        return Ordering::Importance;
    }
    throw ConfigError("unknown ordering '" + std::string(name) + "'");
}

std::vector<double> priority_random(std::span<const double> psi, std::span<const double> rates) {
    if (psi.size() != rates.size()) {
        throw std::invalid_argument("priority_random: psi and rates lengths differ");
    }
    std::vector<double> gamma(psi.size());
    for (std::size_t m = 0; m < psi.size(); ++m) {
        gamma[m] = psi[m] * psi[m] * rates[m];
    }
    return gamma;
}

std::vector<std::size_t> priority_order(std::span<const double> psi, std::span<const double> rates) {
    const auto gamma = priority_random(psi, rates);
    std::vector<std::size_t> idx;
    for (std::size_t m = 0; m < psi.size(); ++m) {
        if (psi[m] >= 0.0 && rates[m] > 0.0) {
            idx.push_back(m);
        }
    }
    return by_descending(gamma, std::move(idx));
}

DimSet random_dims(std::size_t count, std::size_t feature_dim, std::uint64_t seed) {
    if (count > feature_dim) {
        throw std::invalid_argument("random_dims: count exceeds feature dimension");
    }
    std::vector<std::size_t> pool(feature_dim);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, feature_dim - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    DimSet dims(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(dims.begin(), dims.end());
    return dims;
}

SelectionDecision select_random_ordering(std::span<const double> scores, std::span<const double> rates,
                                         const SelectionContext& ctx) {
    require_context(ctx, scores.size(), rates.size());
    const GmModel& model = *ctx.model;
    const auto psi = margins(posteriors(scores, ctx.calib), model.g_min(), model.delta_max());
    const auto order = priority_order(psi, rates);

    double best = 0.0;
    std::size_t best_size = 0;
    std::size_t best_features = 0;
    for (std::size_t s = 1; s <= order.size(); ++s) {
        const std::span<const std::size_t> prefix(order.data(), s);
        const std::size_t features = feasible_count(rates, prefix, ctx.comm, model.feature_dim());
        if (features == 0) {
            break;  // longer prefixes only shrink the feature budget
        }
        const double f = objective_for(scores, prefix, psi, Ordering::Random, features, ctx);
        if (f > best) {
            best = f;
            best_size = s;
            best_features = features;
        }
    }
    auto d = finalize(Scheme::ProposedRandom, Ordering::Random, FusionMode::Attentive,
                      {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_size)}, best_features,
                      rates, ctx);
    if (!d.empty()) {
        d.objective = best;
    }
    return d;
}

SelectionDecision select_importance_ordering(std::span<const double> scores, std::span<const double> rates,
                                             const SelectionContext& ctx) {
    require_context(ctx, scores.size(), rates.size());
    const GmModel& model = *ctx.model;
    const std::size_t dim = model.feature_dim();
    const auto pi_hat = posteriors(scores, ctx.calib);

    double best = 0.0;
    std::vector<std::size_t> best_set;
    std::size_t best_features = 0;
    for (std::size_t k = 1; k <= dim; ++k) {
        const auto psi = margins(pi_hat, model.g_min_top(k), model.delta_max_top(k));
        const auto order = priority_order(psi, rates);

        // Greedy prefix: stop at the first sensor that no longer fits k features.
        std::size_t s = 0;
        double used = 0.0;
        const double bits = ctx.comm.bits_per_feature * static_cast<double>(k);
        while (s < order.size() && used + bits / rates[order[s]] <= ctx.comm.slot_duration_s) {
            used += bits / rates[order[s]];
            ++s;
        }
        if (s == 0) {
            continue;
        }
        const std::span<const std::size_t> chosen(order.data(), s);
        const std::size_t expanded = feasible_count(rates, chosen, ctx.comm, dim);

        double f = objective_for(scores, chosen, psi, Ordering::Importance, k, ctx);
        std::size_t features = k;
        if (expanded > k) {
            const auto psi_expanded = margins(pi_hat, model.g_min_top(expanded), model.delta_max_top(expanded));
            const double f_expanded = objective_for(scores, chosen, psi_expanded, Ordering::Importance, expanded, ctx);
            if (f_expanded >= f) {
                f = f_expanded;
                features = expanded;
            }
        }
        if (f > best) {
            best = f;
            best_set.assign(chosen.begin(), chosen.end());
            best_features = features;
        }
    }
    auto d = finalize(Scheme::ProposedImportance, Ordering::Importance, FusionMode::Attentive, std::move(best_set),
                      best_features, rates, ctx);
    if (!d.empty()) {
        d.objective = best;
    }
    return d;
}

SelectionDecision when2com_select(std::span<const double> scores, std::span<const double> rates, Ordering ordering,
                                  const SelectionContext& ctx) {
    require_context(ctx, scores.size(), rates.size());
    const std::size_t num_sensors = scores.size();
    const auto fw = softmax_weights(scores, ctx.temperature);
    const double threshold = 1.0 / static_cast<double>(num_sensors);

    std::vector<std::size_t> chosen;
    for (std::size_t m = 0; m < num_sensors; ++m) {
        if (fw.weights[m] > threshold) {
            chosen.push_back(m);
        }
    }
    if (chosen.empty()) {
        // Uniform weights sit exactly on the threshold; keep the single strongest sensor.
        chosen.push_back(static_cast<std::size_t>(
            std::distance(fw.weights.begin(), std::max_element(fw.weights.begin(), fw.weights.end()))));
    }
    std::size_t features = feasible_count(rates, chosen, ctx.comm, ctx.model->feature_dim());
    while (features == 0 && !chosen.empty()) {
        // Drop the lowest-weight member; among equals drop the highest index.
        auto weakest = chosen.begin();
        for (auto it = chosen.begin(); it != chosen.end(); ++it) {
            if (fw.weights[*it] <= fw.weights[*weakest]) {
                weakest = it;
            }
        }
        chosen.erase(weakest);
        if (!chosen.empty()) {
            features = feasible_count(rates, chosen, ctx.comm, ctx.model->feature_dim());
        }
    }
    return finalize(Scheme::When2com, ordering, FusionMode::Attentive, std::move(chosen), features, rates, ctx);
}

SelectionDecision best_channel_select(std::span<const double> rates, std::size_t k, Ordering ordering,
                                      const SelectionContext& ctx) {
    require_context(ctx, rates.size(), rates.size());
    if (k == 0) {
        throw std::invalid_argument("best_channel_select: k must be positive");
    }
    std::vector<std::size_t> idx(rates.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    idx = by_descending(rates, std::move(idx));
    idx.resize(std::min(k, idx.size()));
    const std::size_t features = feasible_count(rates, idx, ctx.comm, ctx.model->feature_dim());
    if (features == 0) {
        throw InfeasibleSelection("best_channel_select: no feature fits the slot");
    }
    return finalize(Scheme::BestChannel, ordering, FusionMode::Attentive, std::move(idx), features, rates, ctx);
}

SelectionDecision all_inclusive_select(std::span<const double> rates, FusionMode fusion, Ordering ordering,
                                       const SelectionContext& ctx) {
    require_context(ctx, rates.size(), rates.size());
    std::vector<std::size_t> idx(rates.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t features = feasible_count(rates, idx, ctx.comm, ctx.model->feature_dim());
    if (features == 0) {
        throw InfeasibleSelection("all_inclusive_select: no feature fits the slot");
    }
    const Scheme scheme = fusion == FusionMode::Average ? Scheme::AllAverage : Scheme::AllAttentive;
    return finalize(scheme, ordering, fusion, std::move(idx), features, rates, ctx);
}

SelectionDecision exhaustive_select(std::span<const double> scores, std::span<const double> rates,
                                    Ordering ordering, const SelectionContext& ctx, std::size_t m_limit) {
    require_context(ctx, scores.size(), rates.size());
    const std::size_t num_sensors = scores.size();
    if (num_sensors > m_limit || num_sensors >= 63) {
        throw std::invalid_argument("exhaustive_select: " + std::to_string(num_sensors) +
                                    " sensors exceed the enumeration limit");
    }
    const GmModel& model = *ctx.model;
    const std::size_t dim = model.feature_dim();
    const auto pi_hat = posteriors(scores, ctx.calib);

    std::vector<std::vector<double>> psi_by_count;
    if (ordering == Ordering::Importance) {
        psi_by_count.resize(dim + 1);
        for (std::size_t k = 1; k <= dim; ++k) {
            psi_by_count[k] = margins(pi_hat, model.g_min_top(k), model.delta_max_top(k));
        }
    }
    const auto psi_full = margins(pi_hat, model.g_min(), model.delta_max());

    double best = 0.0;
    std::vector<std::size_t> best_set;
    std::size_t best_features = 0;
    std::vector<std::size_t> subset;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << num_sensors); ++mask) {
        subset.clear();
        for (std::size_t m = 0; m < num_sensors; ++m) {
            if (mask & (std::uint64_t{1} << m)) {
                subset.push_back(m);
            }
        }
        const std::size_t max_features = feasible_count(rates, subset, ctx.comm, dim);
        if (max_features == 0) {
            continue;
        }
        if (ordering == Ordering::Random) {
            // F scales with sqrt(D~): the largest feasible count is optimal whenever F > 0.
            const double f = objective_for(scores, subset, psi_full, Ordering::Random, max_features, ctx);
            if (f > best) {
                best = f;
                best_set = subset;
                best_features = max_features;
            }
            continue;
        }
        for (std::size_t k = 1; k <= max_features; ++k) {
            const double f = objective_for(scores, subset, psi_by_count[k], Ordering::Importance, k, ctx);
            if (f > best) {
                best = f;
                best_set = subset;
                best_features = k;
            }
        }
    }
    auto d = finalize(Scheme::Exhaustive, ordering, FusionMode::Attentive, std::move(best_set), best_features, rates,
                      ctx);
    if (!d.empty()) {
        d.objective = best;
    }
    return d;
}

double decision_objective(const SelectionDecision& decision, std::span<const double> scores,
                          const SelectionContext& ctx) {
    if (decision.empty()) {
        throw std::invalid_argument("decision_objective: empty decision");
    }
    const GmModel& model = *ctx.model;
    const std::size_t k = decision.num_features;
    const auto pi_hat = posteriors(scores, ctx.calib);
    const auto psi = decision.ordering == Ordering::Importance
                         ? margins(pi_hat, model.g_min_top(k), model.delta_max_top(k))
                         : margins(pi_hat, model.g_min(), model.delta_max());
    if (decision.fusion == FusionMode::Average) {
        const std::vector<double> ones(decision.sensors.size(), 1.0);
        return surrogate(ones, gather(psi, decision.sensors), decision.ordering, k, model.feature_dim(),
                         model.num_classes())
            .objective;
    }
    return objective_for(scores, decision.sensors, psi, decision.ordering, k, ctx);
}

SelectionDecision run_scheme(Scheme scheme, Ordering benchmark_ordering, std::span<const double> scores,
                             std::span<const double> rates, const SelectionContext& ctx,
                             std::size_t best_channel_k) {
    switch (scheme) {
        case Scheme::ProposedRandom: return select_random_ordering(scores, rates, ctx);
        case Scheme::ProposedImportance: return select_importance_ordering(scores, rates, ctx);
        case Scheme::When2com: return when2com_select(scores, rates, benchmark_ordering, ctx);
        case Scheme::BestChannel: return best_channel_select(rates, best_channel_k, benchmark_ordering, ctx);
        case Scheme::AllAttentive: return all_inclusive_select(rates, FusionMode::Attentive, benchmark_ordering, ctx);
        case Scheme::AllAverage: return all_inclusive_select(rates, FusionMode::Average, benchmark_ordering, ctx);
        case Scheme::Exhaustive: return exhaustive_select(scores, rates, benchmark_ordering, ctx);
    }
    throw std::invalid_argument("run_scheme: unknown scheme");
}

}  // namespace semsel
