#include "semsel/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace semsel {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const ConfigError&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

SweepAxis parse_axis(const std::string& value) {
    if (value == "snr_db") return SweepAxis::SnrDb;
    if (value == "prior_relevance") return SweepAxis::PriorRelevance;
    if (value == "num_sensors") return SweepAxis::NumSensors;
    throw ConfigError("config key 'sweep_axis': unknown axis '" + value + "'");
}

std::vector<Ordering> parse_orderings(const std::string& value) {
    if (value == "both") {
        return {Ordering::Random, Ordering::Importance};
    }
    return {parse_ordering(value)};
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"num_classes", [](auto& c, auto& k, auto& v) { c.model.num_classes = parse_uint(k, v); }},
        {"feature_dim", [](auto& c, auto& k, auto& v) { c.model.feature_dim = parse_uint(k, v); }},
        {"centroid_radius", [](auto& c, auto& k, auto& v) { c.model.centroid_radius = parse_real(k, v); }},
        {"cov_low", [](auto& c, auto& k, auto& v) { c.model.cov_low = parse_real(k, v); }},
        {"cov_high", [](auto& c, auto& k, auto& v) { c.model.cov_high = parse_real(k, v); }},
        {"num_sensors", [](auto& c, auto& k, auto& v) { c.num_sensors = parse_uint(k, v); }},
        {"prior_relevance", [](auto& c, auto& k, auto& v) { c.prior_relevance = parse_real(k, v); }},
        {"query_noise_factor", [](auto& c, auto& k, auto& v) { c.query_noise_factor = parse_real(k, v); }},
        {"key_dim", [](auto& c, auto& k, auto& v) { c.key_dim = parse_uint(k, v); }},
        {"temperature", [](auto& c, auto& k, auto& v) { c.temperature = parse_real(k, v); }},
        {"bandwidth_hz", [](auto& c, auto& k, auto& v) { c.comm.bandwidth_hz = parse_real(k, v); }},
        {"noise_power_w", [](auto& c, auto& k, auto& v) { c.comm.noise_power_w = parse_real(k, v); }},
        {"path_loss", [](auto& c, auto& k, auto& v) { c.comm.path_loss = parse_real(k, v); }},
        {"path_loss_db", [](auto& c, auto& k, auto& v) { c.comm.path_loss = db_to_linear(parse_real(k, v)); }},
        {"slot_duration_s", [](auto& c, auto& k, auto& v) { c.comm.slot_duration_s = parse_real(k, v); }},
        {"bits_per_feature", [](auto& c, auto& k, auto& v) { c.comm.bits_per_feature = parse_real(k, v); }},
        {"mean_rx_snr_db", [](auto& c, auto& k, auto& v) { c.mean_rx_snr_db = parse_real(k, v); }},
        {"schemes",
         [](auto& c, auto&, auto& v) {
             c.schemes.clear();
             for (const auto& s : split_list(v)) {
                 c.schemes.push_back(parse_scheme(s));
             }
         }},
        {"ordering", [](auto& c, auto&, auto& v) { c.orderings = parse_orderings(v); }},
        {"best_channel_k", [](auto& c, auto& k, auto& v) { c.best_channel_k = parse_uint(k, v); }},
        {"trials", [](auto& c, auto& k, auto& v) { c.trials = parse_uint(k, v); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_uint(k, v); }},
        {"sweep_axis", [](auto& c, auto&, auto& v) { c.sweep_axis = parse_axis(v); }},
        {"sweep_values",
         [](auto& c, auto& k, auto& v) {
             c.sweep_values.clear();
             for (const auto& s : split_list(v)) {
                 c.sweep_values.push_back(parse_real(k, s));
             }
         }},
        {"calibration_samples", [](auto& c, auto& k, auto& v) { c.calibration_samples = parse_uint(k, v); }},
        {"bound_trials", [](auto& c, auto& k, auto& v) { c.bound_trials = parse_uint(k, v); }},
        {"oracle_instances", [](auto& c, auto& k, auto& v) { c.oracle_instances = parse_uint(k, v); }},
    };
    return table;
}

}  // namespace

std::string_view sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SnrDb: return "snr_db";
        case SweepAxis::PriorRelevance: return "prior_relevance";
        case SweepAxis::NumSensors: return "num_sensors";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
    if (model.num_classes < 2) fail("num_classes must be >= 2");
    if (model.feature_dim < 1) fail("feature_dim must be >= 1");
    if (!(model.centroid_radius > 0.0)) fail("centroid_radius must be positive");
    if (!(model.cov_low > 0.0) || !(model.cov_high >= model.cov_low)) fail("need 0 < cov_low <= cov_high");
    if (num_sensors < 1) fail("num_sensors must be >= 1");
    if (!(prior_relevance > 0.0 && prior_relevance < 1.0)) fail("prior_relevance must lie in (0, 1)");
    if (!(query_noise_factor >= 0.0)) fail("query_noise_factor must be non-negative");
    if (key_dim < 1 || key_dim > model.feature_dim) fail("key_dim must lie in 1..feature_dim");
    if (!(temperature > 0.0)) fail("temperature must be positive");
    try {
        comm.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (schemes.empty()) fail("schemes must be non-empty");
    if (orderings.empty()) fail("ordering must be set");
    if (best_channel_k < 1) fail("best_channel_k must be >= 1");
    if (trials < 1) fail("trials must be >= 1");
    if (sweep_values.empty()) fail("sweep_values must be non-empty");
    for (double v : sweep_values) {
        if (!std::isfinite(v)) fail("sweep_values must be finite");
        if (sweep_axis == SweepAxis::PriorRelevance && !(v > 0.0 && v < 1.0)) {
            fail("prior_relevance sweep values must lie in (0, 1)");
        }
        if (sweep_axis == SweepAxis::NumSensors && (v < 1.0 || v != std::floor(v))) {
            fail("num_sensors sweep values must be positive integers");
        }
    }
    if (calibration_samples < 1000) fail("calibration_samples must be >= 1000");
    if (bound_trials < 1) fail("bound_trials must be >= 1");
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
    auto list = [](const auto& items, auto&& fmt) {
        std::string s;
        for (const auto& x : items) {
            if (!s.empty()) s += ',';
            s += fmt(x);
        }
        return s;
    };
    out << "num_classes=" << c.model.num_classes << '\n'
        << "feature_dim=" << c.model.feature_dim << '\n'
        << "centroid_radius=" << format_double(c.model.centroid_radius) << '\n'
        << "cov_low=" << format_double(c.model.cov_low) << '\n'
        << "cov_high=" << format_double(c.model.cov_high) << '\n'
        << "num_sensors=" << c.num_sensors << '\n'
        << "prior_relevance=" << format_double(c.prior_relevance) << '\n'
        << "query_noise_factor=" << format_double(c.query_noise_factor) << '\n'
        << "key_dim=" << c.key_dim << '\n'
        << "temperature=" << format_double(c.temperature) << '\n'
        << "bandwidth_hz=" << format_double(c.comm.bandwidth_hz) << '\n'
        << "noise_power_w=" << format_double(c.comm.noise_power_w) << '\n'
        << "path_loss=" << format_double(c.comm.path_loss) << '\n'
        << "slot_duration_s=" << format_double(c.comm.slot_duration_s) << '\n'
        << "bits_per_feature=" << format_double(c.comm.bits_per_feature) << '\n'
        << "mean_rx_snr_db=" << format_double(c.mean_rx_snr_db) << '\n'
        << "schemes=" << list(c.schemes, [](Scheme s) { return std::string(scheme_name(s)); }) << '\n'
        << "ordering="
        << (c.orderings.size() == 2 ? std::string("both") : std::string(ordering_name(c.orderings.front()))) << '\n'
        << "best_channel_k=" << c.best_channel_k << '\n'
        << "trials=" << c.trials << '\n'
        << "seed=" << c.seed << '\n'
        << "sweep_axis=" << sweep_axis_name(c.sweep_axis) << '\n'
        << "sweep_values=" << list(c.sweep_values, [](double v) { return format_double(v); }) << '\n'
        << "calibration_samples=" << c.calibration_samples << '\n'
        << "bound_trials=" << c.bound_trials << '\n'
        << "oracle_instances=" << c.oracle_instances << '\n';
}

}  // namespace semsel
