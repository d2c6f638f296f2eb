#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "semsel/matching.hpp"

using namespace semsel;

TEST_CASE("truncation encoders select the leading dimensions") {
    const MatchingModel mm = MatchingModel::truncation(2, 4);
    const std::vector<double> f0{1.0, 2.0, 3.0, 4.0};
    const auto q = encode_query(mm, f0);
    CHECK(q == std::vector<double>{1.0, 2.0});
    const std::vector<double> f{5.0, 6.0, 7.0, 8.0};
    CHECK(relevance_score(q, f, mm) == doctest::Approx(17.0));
    const auto u = mm.key_projection(q);
    CHECK(u == std::vector<double>{1.0, 2.0, 0.0, 0.0});
    CHECK_THROWS(MatchingModel::truncation(5, 4));
}

TEST_CASE("exact posterior agrees with the direct likelihood ratio") {
    const GmModel m = build_model({6, 5, 2.0, 0.2, 1.0}, 4);
    const MatchingModel mm = MatchingModel::truncation(3, 5);
    const std::vector<double> q{0.7, -0.4, 1.1};
    const auto u = mm.key_projection(q);
    for (double phi : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
        for (double prior : {0.2, 0.6}) {
            const double lib = posterior_exact(m, mm, q, 2, phi, prior);
            CHECK(lib == doctest::Approx(oracle::posterior_exact(m, u, 2, phi, prior)).epsilon(1e-12));
            CHECK(lib >= 0.0);
            CHECK(lib <= 1.0);
        }
    }
    const std::vector<double> zero{0.0, 0.0, 0.0};
    CHECK_THROWS_AS(posterior_exact(m, mm, zero, 0, 0.0, 0.5), std::domain_error);
}

TEST_CASE("posterior estimate is the scaled sigmoid") {
    CalibrationStats s{2.0, 1.0, 4.0, 0.25};
    // at phi = phi_bar the estimate equals the prior
    CHECK(posterior_estimate(s, 1.0) == doctest::Approx(0.25));
    const double phi = 3.0;
    const double expect = 1.0 / (1.0 + 3.0 * std::exp(-2.0 * (phi - 1.0) / 4.0));
    CHECK(posterior_estimate(s, phi) == doctest::Approx(expect).epsilon(1e-14));
    // extreme scores saturate without overflow
    CHECK(posterior_estimate(s, 1e9) == doctest::Approx(1.0));
    CHECK(posterior_estimate(s, -1e9) >= 0.0);
    CHECK(posterior_estimate(s, -1e9) < 1e-200);
    CHECK(s.with_prior(0.5).prior == 0.5);
}

TEST_CASE("calibration on an antisymmetric binary model") {
    Matrix c(2, 2);
    c(0, 0) = 2.0;
    c(1, 0) = -2.0;
    const GmModel m(c, {0.5, 0.5});
    const MatchingModel mm = MatchingModel::truncation(2, 2);
    const auto s = calibrate(m, mm, 0.5, 20000, 0.0, 5);
    CHECK(std::abs(s.phi_bar) < 0.05);
    // q = mu_l0 exactly: gap = q^T (mu_l0 - mu_other) = 8, variance = 4 * 0.5 = 2
    CHECK(s.alpha_bar == doctest::Approx(8.0));
    CHECK(s.sigma2_bar == doctest::Approx(2.0));
    CHECK(s.query_effective());
    CHECK_THROWS(calibrate(m, mm, 0.5, 999, 0.0, 5));
}

TEST_CASE("calibration stats file round-trips") {
    CalibrationStats s{1.25, -0.5, 3.0, 0.4};
    std::stringstream buf;
    write_calibration(buf, s);
    const auto back = read_calibration(buf);
    CHECK(back.alpha_bar == s.alpha_bar);
    CHECK(back.phi_bar == s.phi_bar);
    CHECK(back.sigma2_bar == s.sigma2_bar);
    CHECK(back.prior == s.prior);
    std::stringstream bad("alpha_bar=1\n");
    CHECK_THROWS(read_calibration(bad));
}
