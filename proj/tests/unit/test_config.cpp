#include <doctest.h>

#include <sstream>

#include "semsel/config.hpp"

using namespace semsel;

TEST_CASE("defaults validate and round-trip") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    std::stringstream buf;
    write_config(buf, c);
    const auto back = parse_config(buf);
    std::stringstream again;
    write_config(again, back);
    CHECK(again.str() == buf.str());
}

TEST_CASE("parser handles comments, lists and overrides") {
    std::stringstream in(
        "# comment\n"
        "num_sensors = 5   # trailing\n"
        "schemes = proposed-random, when2com\n"
        "ordering = importance\n"
        "sweep_axis = prior_relevance\n"
        "sweep_values = 0.2, 0.5\n"
        "path_loss_db = -30\n");
    const auto c = parse_config(in);
    CHECK(c.num_sensors == 5);
    CHECK(c.schemes == std::vector<Scheme>{Scheme::ProposedRandom, Scheme::When2com});
    CHECK(c.orderings == std::vector<Ordering>{Ordering::Importance});
    CHECK(c.sweep_axis == SweepAxis::PriorRelevance);
    CHECK(c.sweep_values == std::vector<double>{0.2, 0.5});
    CHECK(c.comm.path_loss == doctest::Approx(1e-3));
}

TEST_CASE("invalid configs raise ConfigError") {
    const char* bad[] = {
        "unknown_key = 1\n",      "num_sensors = -3\n",        "num_sensors = 0\n",
        "prior_relevance = 1\n",  "temperature = 0\n",         "schemes = nope\n",
        "ordering = sideways\n",  "no equals sign\n",          "key_dim = 1000\n",
        "sweep_axis = prior_relevance\nsweep_values = 0.5, 1.5\n", "trials = 0\n", "centroid_radius = x\n",
    };
    for (const char* text : bad) {
        std::stringstream in(text);
        CHECK_THROWS_AS(parse_config(in), ConfigError);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.cfg"), ConfigError);
}
