#ifndef SEMSEL_SELECTION_HPP
#define SEMSEL_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "semsel/accuracy.hpp"
#include "semsel/channel.hpp"
#include "semsel/common.hpp"
#include "semsel/gm_model.hpp"
#include "semsel/matching.hpp"

namespace semsel {

enum class Scheme {
    ProposedRandom,
    ProposedImportance,
    When2com,
    BestChannel,
    AllAttentive,
    AllAverage,
    Exhaustive,
};

std::string_view scheme_name(Scheme scheme);
/// Accepts the CLI identifiers (proposed-random, ..., exhaustive).
Scheme parse_scheme(std::string_view name);
std::span<const Scheme> all_schemes();

std::string_view ordering_name(Ordering ordering);
Ordering parse_ordering(std::string_view name);

enum class FusionMode { Attentive, Average };

struct SelectionDecision {
    Scheme scheme = Scheme::ProposedRandom;
    Ordering ordering = Ordering::Random;
    FusionMode fusion = FusionMode::Attentive;
    std::vector<std::size_t> sensors;  // selection order
    std::size_t num_features = 0;
    DimSet feature_dims;               // ascending
    std::vector<double> time_alloc;    // aligned with `sensors`
    std::optional<double> objective;   // surrogate F where the scheme optimizes it

    bool empty() const noexcept { return sensors.empty(); }
};

/// Everything a scheme needs besides the per-trial scores and rates.
struct SelectionContext {
    const GmModel* model = nullptr;
    CalibrationStats calib;
    CommConfig comm;
    double temperature = 1.0;
    std::uint64_t dims_seed = 0;  // drives the random-ordering dimension draw
};

/// Priority indicator Psi_m^2 r_m.
std::vector<double> priority_random(std::span<const double> psi, std::span<const double> rates);

/// Sensor indices with psi >= 0 and a positive rate, sorted by descending
/// psi^2 r (ties by ascending index).
std::vector<std::size_t> priority_order(std::span<const double> psi, std::span<const double> rates);

/// Priority-ranked prefix search over sensor counts (random feature ordering).
SelectionDecision select_random_ordering(std::span<const double> scores, std::span<const double> rates,
                                         const SelectionContext& ctx);

/// Nested search over feature counts with per-count priority ranking (importance ordering).
SelectionDecision select_importance_ordering(std::span<const double> scores, std::span<const double> rates,
                                             const SelectionContext& ctx);

/// Sensors whose softmax weight over all M scores exceeds 1/M.
SelectionDecision when2com_select(std::span<const double> scores, std::span<const double> rates,
                                  Ordering ordering, const SelectionContext& ctx);

/// Top-k sensors by channel gain. Throws InfeasibleSelection if no feature fits.
SelectionDecision best_channel_select(std::span<const double> rates, std::size_t k, Ordering ordering,
                                      const SelectionContext& ctx);

/// Every sensor. Throws InfeasibleSelection if no feature fits.
SelectionDecision all_inclusive_select(std::span<const double> rates, FusionMode fusion, Ordering ordering,
                                       const SelectionContext& ctx);

/// Surrogate maximizer over all sensor subsets (and all feature counts for
/// importance ordering). Throws std::invalid_argument when M > m_limit.
SelectionDecision exhaustive_select(std::span<const double> scores, std::span<const double> rates,
                                    Ordering ordering, const SelectionContext& ctx, std::size_t m_limit = 12);

/// Surrogate F of an arbitrary non-empty decision under its own ordering and fusion.
double decision_objective(const SelectionDecision& decision, std::span<const double> scores,
                          const SelectionContext& ctx);

/// Dispatches by scheme. `benchmark_ordering` applies to the benchmark schemes
/// and the exhaustive oracle; the proposed schemes carry their own ordering.
SelectionDecision run_scheme(Scheme scheme, Ordering benchmark_ordering, std::span<const double> scores,
                             std::span<const double> rates, const SelectionContext& ctx,
                             std::size_t best_channel_k);

/// Sorted random subset of `count` dimensions out of `feature_dim`.
DimSet random_dims(std::size_t count, std::size_t feature_dim, std::uint64_t seed);

}  // namespace semsel

#endif  // SEMSEL_SELECTION_HPP
