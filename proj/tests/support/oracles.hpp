#ifndef SEMSEL_TEST_ORACLES_HPP
#define SEMSEL_TEST_ORACLES_HPP

// Straightforward reimplementations used to cross-check the library.
// They favour directness over speed or numerical care.

#include <cstdint>
#include <span>
#include <vector>

#include "semsel/gm_model.hpp"

namespace oracle {

/// Upper normal tail by composite Simpson integration of the density.
double tail_q(double x);

/// Relevance posterior from the textbook ratio of mixture likelihoods.
double posterior_exact(const semsel::GmModel& model, std::span<const double> key_projection,
                       std::size_t true_class, double score, double prior);

/// F for random ordering: sqrt(Dt/D) * sum(e psi) / sqrt(sum e^2).
double f_random(std::span<const double> e, std::span<const double> psi, std::size_t dt, std::size_t d);
/// F for importance ordering: sum(e psi) / sqrt(sum e^2).
double f_importance(std::span<const double> e, std::span<const double> psi);

double shannon_rate(double bandwidth, double power, double gain, double noise);

/// Largest Dt in 0..D with sum(bits * Dt / r) <= T, by linear scan.
std::size_t max_features_scan(std::span<const double> rates, double slot, double bits, std::size_t d);

double min_pairwise_dg(const semsel::GmModel& model, std::span<const std::size_t> dims);
double max_norm(const semsel::GmModel& model, std::span<const std::size_t> dims);

struct BruteBest {
    double objective = 0.0;
    std::vector<std::size_t> sensors;
    std::size_t features = 0;
};

/// Best subset (and feature count) over every subset, from raw scores and posteriors.
BruteBest brute_force(const semsel::GmModel& model, std::span<const double> scores,
                      std::span<const double> pi_hat, std::span<const double> rates, double slot, double bits,
                      double temperature, bool importance);

/// Monte-Carlo accuracy of nearest-centroid classification of a weighted
/// fusion of views, `relevant[m]` saying whether view m shows the target.
struct McResult {
    double accuracy = 0.0;
    double std_err = 0.0;
};
McResult mc_conditional_accuracy(const semsel::GmModel& model, std::span<const double> weights,
                                 const std::vector<bool>& relevant, std::size_t trials, std::uint64_t seed);

}  // namespace oracle

#endif  // SEMSEL_TEST_ORACLES_HPP
