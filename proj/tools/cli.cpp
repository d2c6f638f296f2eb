#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "semsel/config.hpp"
#include "semsel/experiment.hpp"
#include "semsel/selftest.hpp"

namespace semsel::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string schemes;
    std::string ordering;
};

std::string command_line(int argc, const char* const* argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

ExperimentConfig resolve_config(const Options& opt, const std::string& subcommand) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = load_config(opt.config_path);
    }
    std::ostringstream overrides;
    if (opt.seed) overrides << "seed=" << *opt.seed << '\n';
    if (opt.trials) {
        const char* key = subcommand == "validate-bound" ? "bound_trials"
                          : subcommand == "oracle-gap"   ? "oracle_instances"
                                                         : "trials";
        overrides << key << '=' << *opt.trials << '\n';
    }
    if (!opt.schemes.empty()) overrides << "schemes=" << opt.schemes << '\n';
    if (!opt.ordering.empty()) overrides << "ordering=" << opt.ordering << '\n';
    if (overrides.tellp() > 0) {
        // Overrides go through the same parser as the file, on top of it.
        std::stringstream merged;
        write_config(merged, cfg);
        merged << overrides.str();
        cfg = parse_config(merged);
    }
    return cfg;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
    auto out = open_output(path);
    fn(out);
    finish(out, path);
}

int run(const std::string& sub, const Options& opt, const std::string& cmd, std::ostream& out) {
    const ExperimentConfig cfg = resolve_config(opt, sub);
    if (sub == "selftest") {
        const auto checks = run_selftest(cfg);
        bool ok = true;
        for (const auto& c : checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.passed && !c.detail.empty()) out << " (" << c.detail << ')';
            out << '\n';
            ok = ok && c.passed;
        }
        return ok ? kOk : kInvariant;
    }

    const fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    const Environment env = prepare_environment(cfg);

    if (sub == "gen-model") {
        write_file(dir / "model.txt", [&](std::ostream& o) { write_model(o, env.model); });
    } else if (sub == "calibrate") {
        write_file(dir / "model.txt", [&](std::ostream& o) { write_model(o, env.model); });
        write_file(dir / "calibration.txt", [&](std::ostream& o) { write_calibration(o, env.calib); });
    } else if (sub == "sweep") {
        for (Ordering o : cfg.orderings) {
            const auto rows = sweep(env, cfg, o);
            const fs::path path = dir / ("sweep_" + std::string(ordering_name(o)) + ".csv");
            write_file(path, [&](std::ostream& s) { write_sweep_csv(s, rows); });
            out << "wrote " << path.string() << '\n';
        }
    } else if (sub == "validate-bound") {
        for (Ordering o : cfg.orderings) {
            const auto rows = validate_bound(env, cfg, o);
            const fs::path path = dir / ("bound_" + std::string(ordering_name(o)) + ".csv");
            write_file(path, [&](std::ostream& s) { write_bound_csv(s, rows); });
            const auto [k_theory, k_emp] = bound_argmax(rows);
            out << ordering_name(o) << ": argmax theory k=" << k_theory << ", empirical k=" << k_emp << '\n';
        }
    } else if (sub == "oracle-gap") {
        for (Ordering o : cfg.orderings) {
            const auto rows = oracle_gap(env, cfg, o);
            const fs::path path = dir / ("oracle_gap_" + std::string(ordering_name(o)) + ".csv");
            write_file(path, [&](std::ostream& s) { write_oracle_gap_csv(s, rows); });
            out << ordering_name(o) << ": median gap " << format_double(gap_quantile(rows, 0.5)) << ", p95 gap "
                << format_double(gap_quantile(rows, 0.95)) << '\n';
        }
    }
    write_file(dir / "metadata.txt", [&](std::ostream& o) { write_metadata(o, cfg, env, cmd); });
    return kOk;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relevance-aware sensor selection experiments", "semsel"};
    app.require_subcommand(1, 1);
    Options opt;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"gen-model", "Build the Gaussian-mixture model and write it"},
        {"calibrate", "Estimate relevance-score statistics"},
        {"sweep", "Accuracy of each scheme along the sweep axis"},
        {"validate-bound", "Empirical accuracy vs bound for the top-k sensors"},
        {"oracle-gap", "Priority heuristic vs exhaustive search"},
        {"selftest", "Run the invariant suite"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "Config file (key = value)");
        sub->add_option("--out", opt.out_dir, "Output directory");
        sub->add_option("--seed", opt.seed, "Base seed override");
        sub->add_option("--trials", opt.trials, "Trial count override");
        sub->add_option("--schemes", opt.schemes, "Comma-separated scheme list");
        sub->add_option("--ordering", opt.ordering, "Feature ordering")
            ->check(CLI::IsMember({"random", "importance", "both"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        return run(sub, opt, command_line(argc, argv), out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const InvariantError& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace semsel::cli
