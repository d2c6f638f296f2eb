#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "semsel/experiment.hpp"
#include "semsel/selftest.hpp"

namespace py = pybind11;
using namespace semsel;

namespace {

ExperimentConfig config_from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string config_to_text(const ExperimentConfig& c) {
    std::ostringstream out;
    write_config(out, c);
    return out.str();
}

template <typename Rows, typename Writer>
std::string to_csv(const Rows& rows, Writer write) {
    std::ostringstream out;
    write(out, std::span(rows));
    return out.str();
}

py::dict decision_dict(const SelectionDecision& d) {
    py::dict out;
    out["scheme"] = std::string(scheme_name(d.scheme));
    out["ordering"] = std::string(ordering_name(d.ordering));
    out["sensors"] = d.sensors;
    out["num_features"] = d.num_features;
    out["feature_dims"] = d.feature_dims;
    out["time_alloc"] = d.time_alloc;
    out["objective"] = d.objective ? py::cast(*d.objective) : py::none();
    return out;
}

SelectionContext context(const Environment& env, const ExperimentConfig& c, double snr_db, std::uint64_t dims_seed) {
    SelectionContext ctx;
    ctx.model = &env.model;
    ctx.calib = env.calib.with_prior(c.prior_relevance);
    ctx.comm = c.comm.with_mean_rx_snr(db_to_linear(snr_db));
    ctx.temperature = c.temperature;
    ctx.dims_seed = dims_seed;
    return ctx;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Relevance-aware sensor selection for multi-view classification";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("num_classes", &ModelParams::num_classes)
        .def_readwrite("feature_dim", &ModelParams::feature_dim)
        .def_readwrite("centroid_radius", &ModelParams::centroid_radius)
        .def_readwrite("cov_low", &ModelParams::cov_low)
        .def_readwrite("cov_high", &ModelParams::cov_high);

    py::class_<GmModel>(m, "GmModel")
        .def_property_readonly("num_classes", &GmModel::num_classes)
        .def_property_readonly("feature_dim", &GmModel::feature_dim)
        .def("g_min", &GmModel::g_min)
        .def("delta_max", &GmModel::delta_max)
        .def("g_min_top", &GmModel::g_min_top, py::arg("k"))
        .def("delta_max_top", &GmModel::delta_max_top, py::arg("k"))
        .def("min_pairwise_dg",
             [](const GmModel& g, const std::vector<std::size_t>& dims) { return g.min_pairwise_dg(dims); })
        .def("max_mahalanobis_norm",
             [](const GmModel& g, const std::vector<std::size_t>& dims) { return g.max_mahalanobis_norm(dims); })
        .def("centroid", [](const GmModel& g, std::size_t cls) {
            const auto row = g.centroid(cls);
            return std::vector<double>(row.begin(), row.end());
        })
        .def("cov_diag", [](const GmModel& g) { return std::vector<double>(g.cov_diag().begin(), g.cov_diag().end()); })
        .def("importance_order", [](const GmModel& g) {
            return std::vector<std::size_t>(g.importance_order().begin(), g.importance_order().end());
        })
        .def("to_text", [](const GmModel& g) {
            std::ostringstream out;
            write_model(out, g);
            return out.str();
        })
        .def_static("from_text", [](const std::string& text) {
            std::istringstream in(text);
            return read_model(in);
        });

    m.def("build_model", &build_model, py::arg("params"), py::arg("seed"));

    py::class_<CalibrationStats>(m, "CalibrationStats")
        .def(py::init<>())
        .def_readwrite("alpha_bar", &CalibrationStats::alpha_bar)
        .def_readwrite("phi_bar", &CalibrationStats::phi_bar)
        .def_readwrite("sigma2_bar", &CalibrationStats::sigma2_bar)
        .def_readwrite("prior", &CalibrationStats::prior)
        .def("query_effective", &CalibrationStats::query_effective);

    m.def("posterior_estimate", &posterior_estimate, py::arg("stats"), py::arg("score"));
    m.def("conditional_accuracy_lb", &conditional_accuracy_lb, py::arg("g_min"), py::arg("delta_max"),
          py::arg("rho"), py::arg("eta"), py::arg("num_classes"));
    m.def("expected_margin", &expected_margin, py::arg("pi_hat"), py::arg("g_min"), py::arg("delta_max"));
    m.def(
        "surrogate",
        [](const std::vector<double>& exp_scores, const std::vector<double>& psi, const std::string& ordering,
           std::size_t num_features, std::size_t feature_dim, std::size_t num_classes) {
            const auto v = surrogate(exp_scores, psi, parse_ordering(ordering), num_features, feature_dim, num_classes);
            return py::make_tuple(v.objective, v.accuracy_lb);
        },
        py::arg("exp_scores"), py::arg("psi"), py::arg("ordering"), py::arg("num_features"), py::arg("feature_dim"),
        py::arg("num_classes"), "Returns (objective, accuracy_lb).");

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_static("from_text", &config_from_text, py::arg("text"))
        .def_static("load", &load_config, py::arg("path"))
        .def("to_text", &config_to_text)
        .def("validate", &ExperimentConfig::validate)
        .def_readwrite("model", &ExperimentConfig::model)
        .def_readwrite("num_sensors", &ExperimentConfig::num_sensors)
        .def_readwrite("prior_relevance", &ExperimentConfig::prior_relevance)
        .def_readwrite("key_dim", &ExperimentConfig::key_dim)
        .def_readwrite("temperature", &ExperimentConfig::temperature)
        .def_readwrite("mean_rx_snr_db", &ExperimentConfig::mean_rx_snr_db)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("sweep_values", &ExperimentConfig::sweep_values)
        .def_readwrite("calibration_samples", &ExperimentConfig::calibration_samples)
        .def_readwrite("bound_trials", &ExperimentConfig::bound_trials)
        .def_readwrite("oracle_instances", &ExperimentConfig::oracle_instances);

    py::class_<Environment>(m, "Environment")
        .def_readonly("model", &Environment::model)
        .def_readonly("calib", &Environment::calib);

    m.def("prepare_environment", &prepare_environment, py::arg("config"));

    m.def(
        "select",
        [](const Environment& env, const ExperimentConfig& c, const std::string& scheme,
           const std::vector<double>& scores, const std::vector<double>& rates, const std::string& ordering,
           double snr_db, std::uint64_t dims_seed) {
            const auto ctx = context(env, c, snr_db, dims_seed);
            return decision_dict(
                run_scheme(parse_scheme(scheme), parse_ordering(ordering), scores, rates, ctx, c.best_channel_k));
        },
        py::arg("env"), py::arg("config"), py::arg("scheme"), py::arg("scores"), py::arg("rates"),
        py::arg("ordering") = "random", py::arg("snr_db") = 0.0, py::arg("dims_seed") = 0,
        "Runs one selection scheme on given relevance scores and uplink rates.");

    m.def(
        "sweep_csv",
        [](const Environment& env, const ExperimentConfig& c, const std::string& ordering) {
            return to_csv(sweep(env, c, parse_ordering(ordering)), write_sweep_csv);
        },
        py::arg("env"), py::arg("config"), py::arg("ordering"));
    m.def(
        "validate_bound_csv",
        [](const Environment& env, const ExperimentConfig& c, const std::string& ordering) {
            return to_csv(validate_bound(env, c, parse_ordering(ordering)), write_bound_csv);
        },
        py::arg("env"), py::arg("config"), py::arg("ordering"));
    m.def(
        "oracle_gap_csv",
        [](const Environment& env, const ExperimentConfig& c, const std::string& ordering) {
            return to_csv(oracle_gap(env, c, parse_ordering(ordering)), write_oracle_gap_csv);
        },
        py::arg("env"), py::arg("config"), py::arg("ordering"));

    m.def(
        "selftest",
        [](const ExperimentConfig& c) {
            py::list out;
            for (const auto& check : run_selftest(c)) out.append(py::make_tuple(check.name, check.passed, check.detail));
            return out;
        },
        py::arg("config"), "List of (name, passed, detail).");
}
