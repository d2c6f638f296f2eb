#include <doctest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "semsel/gm_model.hpp"

using namespace semsel;

namespace {

GmModel tiny() {
    Matrix c(3, 2);
    c(0, 0) = 0; c(0, 1) = 0;
    c(1, 0) = 2; c(1, 1) = 0;
    c(2, 0) = 0; c(2, 1) = 1;
    return GmModel(c, {1.0, 0.25});
}

}  // namespace

TEST_CASE("pairwise gain and Mahalanobis norm on a hand model") {
    const GmModel m = tiny();
    const std::vector<std::size_t> all{0, 1};
    // pairs: (0,1): 4/1 = 4; (0,2): 1/0.25 = 4; (1,2): 4 + 4 = 8
    CHECK(m.min_pairwise_dg(all) == doctest::Approx(4.0));
    // norms: 0, 2, 2
    CHECK(m.max_mahalanobis_norm(all) == doctest::Approx(2.0));
    // importance: dim0 = (4 + 0 + 4)/3, dim1 = (0 + 4 + 4)/3 -> tie, lower index first
    CHECK(m.importance_order()[0] == 0);
    CHECK(m.g_min_top(1) == doctest::Approx(0.0));
    CHECK(m.g_min_top(2) == doctest::Approx(4.0));
}

TEST_CASE("prefix tables match brute force on random models") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GmModel m = build_model({6, 9, 3.0, 0.05, 1.0}, seed);
        for (std::size_t k = 1; k <= 9; ++k) {
            const auto dims = m.top_dims(k);
            CHECK(dims.size() == k);
            CHECK(m.g_min_top(k) == doctest::Approx(oracle::min_pairwise_dg(m, dims)).epsilon(1e-12));
            CHECK(m.delta_max_top(k) == doctest::Approx(oracle::max_norm(m, dims)).epsilon(1e-12));
        }
        // importance is non-increasing along the order
        for (std::size_t i = 1; i < 9; ++i) {
            CHECK(m.importance()[m.importance_order()[i - 1]] >= m.importance()[m.importance_order()[i]]);
        }
    }
}

TEST_CASE("build_model is deterministic and respects its parameters") {
    const ModelParams p{5, 7, 2.0, 0.1, 0.3};
    const GmModel a = build_model(p, 42);
    CHECK(a == build_model(p, 42));
    CHECK_FALSE(a == build_model(p, 43));
    for (std::size_t l = 0; l < 5; ++l) {
        const auto c = a.centroid(l);
        CHECK(std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0)) <= 2.0);
    }
    for (double v : a.cov_diag()) {
        CHECK(v >= 0.1);
        CHECK(v <= 0.3);
    }
}

TEST_CASE("degenerate models are rejected") {
    CHECK_THROWS(build_model({2, 1, 0.0, 0.1, 1.0}, 1));
    Matrix c(2, 2, 1.0);
    CHECK_THROWS(GmModel(c, {1.0, 1.0}));       // coincident centroids
    Matrix d(2, 2);
    d(1, 0) = 1.0;
    CHECK_THROWS(GmModel(d, {1.0, 0.0}));       // zero variance
    CHECK_THROWS(GmModel(d, {1.0}));            // shape mismatch
    CHECK_THROWS(GmModel(Matrix(1, 2), {1.0, 1.0}));  // single class
}

TEST_CASE("scenario sampling follows the relevance model") {
    const GmModel m = build_model({8, 6, 3.0, 0.1, 1.0}, 3);
    const Scenario a = sample_scenario(m, 5, 0.5, 3.0, 9);
    const Scenario b = sample_scenario(m, 5, 0.5, 3.0, 9);
    CHECK(a.features == b.features);
    CHECK(a.query_feature == b.query_feature);
    CHECK(a.features.rows() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        if (a.relevance[i]) {
            CHECK(a.observed_class[i] == a.true_class);
        } else {
            CHECK(a.observed_class[i] != a.true_class);
        }
    }
    // Prior frequency of relevance over many draws.
    std::size_t relevant = 0;
    for (std::uint64_t s = 0; s < 400; ++s) {
        const Scenario sc = sample_scenario(m, 10, 0.3, 1.0, s);
        for (bool r : sc.relevance) relevant += r ? 1 : 0;
    }
    CHECK(static_cast<double>(relevant) / 4000.0 == doctest::Approx(0.3).epsilon(0.1));
    CHECK_THROWS(sample_scenario(m, 5, 1.0, 1.0, 1));
    CHECK_THROWS(sample_scenario(m, 0, 0.5, 1.0, 1));
}

TEST_CASE("model artifact round-trips and rejects damage") {
    const GmModel m = build_model({4, 5, 3.0, 0.01, 1.0}, 11);
    std::stringstream buf;
    write_model(buf, m);
    const std::string text = buf.str();
    std::stringstream in(text);
    CHECK(read_model(in) == m);

    std::stringstream truncated(text.substr(0, text.size() / 2));
    CHECK_THROWS(read_model(truncated));
    std::stringstream trailing(text + "7\n");
    CHECK_THROWS(read_model(trailing));
}
