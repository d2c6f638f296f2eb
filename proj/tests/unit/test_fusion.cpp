#include <doctest.h>

#include "semsel/fusion.hpp"

using namespace semsel;

TEST_CASE("prune keeps the listed dimensions") {
    const std::vector<double> f{1, 2, 3, 4};
    CHECK(prune(f, std::vector<std::size_t>{1, 3}) == std::vector<double>{2, 4});
    CHECK_THROWS(prune(f, std::vector<std::size_t>{}));
    CHECK_THROWS(prune(f, std::vector<std::size_t>{4}));
}

TEST_CASE("fusion is the weighted sum") {
    const std::vector<std::vector<double>> pruned{{1.0, 2.0}, {3.0, 6.0}};
    const auto w = uniform_weights(2);
    const auto fused = fuse(pruned, w, std::vector<std::size_t>{0, 2});
    CHECK(fused.values == std::vector<double>{2.0, 4.0});
    CHECK(fused.dims == std::vector<std::size_t>{0, 2});
    CHECK_THROWS(fuse(pruned, uniform_weights(3), std::vector<std::size_t>{0, 2}));
}

TEST_CASE("classifier picks the nearest centroid in Mahalanobis distance") {
    Matrix c(3, 2);
    c(1, 0) = 4.0;
    c(2, 1) = 1.0;
    const GmModel m(c, {4.0, 0.25});
    // x = (1.8, 0.4): d0 = 0.81 + 0.64, d1 = 1.21 + 0.64, d2 = 0.81 + 1.44
    CHECK(classify_linear(m, FusedFeature{{1.8, 0.4}, {0, 1}}) == 0);
    CHECK(classify_linear(m, FusedFeature{{2.2, 0.0}, {0, 1}}) == 1);
    // exact tie between classes 0 and 1 goes to the lower index
    CHECK(classify_linear(m, FusedFeature{{2.0, 0.0}, {0, 1}}) == 0);
    // only dimension 1 observed
    CHECK(classify_linear(m, FusedFeature{{0.9}, {1}}) == 2);
    CHECK(squared_distance(m, FusedFeature{{0.0, 1.0}, {0, 1}}, 0) == doctest::Approx(4.0));
}
