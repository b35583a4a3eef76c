#include "vlc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlc/csv.hpp"
#include "vlc/dtw.hpp"
#include "vlc/evaluate.hpp"
#include "vlc/granger.hpp"
#include "vlc/pipeline.hpp"
#include "vlc/simulate.hpp"
#include "vlc/tentropy.hpp"
#include "vlc/types.hpp"

namespace vlc::cli {

const char* const kVersion = "0.1.0";

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// JSON has no encoding for non-finite numbers; they travel as strings.
json json_number(double v) {
    if (std::isnan(v)) return "undefined";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json json_optional(const std::optional<double>& v) {
    if (!v) return nullptr;
    return json_number(*v);
}

struct CommonOpts {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::uint64_t resolve_seed(const CommonOpts& opts) {
    if (opts.seed_given) return opts.seed;
    if (const char* env = std::getenv("VLCAUSAL_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw io_error("VLCAUSAL_SEED is not a valid integer");
    }
    return opts.seed;
}

json config_json(const Config& cfg) {
    return json{
        {"delta_max", cfg.delta_max},
        {"gamma", cfg.gamma},
        {"alpha", cfg.alpha},
        {"sigma", cfg.sigma},
        {"sim_gate", cfg.sim_gate},
        {"te_k", cfg.te_k},
        {"te_l", cfg.te_l},
        {"te_bins", cfg.te_bins.bins},
        {"nboot", cfg.nboot},
        {"seed", cfg.seed},
        {"criterion", cfg.granger_criterion == GrangerCriterion::f_test ? "ftest" : "bic"},
    };
}

json manifest_json(const std::string& command, const Config& cfg,
                   const std::vector<std::string>& input_paths) {
    json inputs = json::array();
    for (const std::string& path : input_paths) {
        inputs.push_back({{"path", path}, {"fnv1a64", fnv1a_hex(read_file(path))}});
    }
    return json{
        {"command", command},
        {"tool_version", kVersion},
        {"seed", cfg.seed},
        {"config", config_json(cfg)},
        {"inputs", inputs},
    };
}

std::string join_args(const std::vector<std::string>& args) {
    std::string joined;
    for (const std::string& a : args) {
        if (!joined.empty()) joined.push_back(' ');
        joined += a;
    }
    return joined;
}

json granger_json(const GrangerReport& r) {
    json out{
        {"rss_restricted", json_number(r.rss_restricted)},
        {"rss_unrestricted", json_number(r.rss_unrestricted)},
        {"bic0", json_number(r.bic0)},
        {"bic1", json_number(r.bic1)},
        {"bic_diff_ratio", json_number(r.bic_ratio)},
        {"f_pvalue", json_number(r.f_pvalue)},
        {"cause", r.cause},
        {"lag_order", r.lag_order},
        {"rank_deficient", r.rank_deficient},
    };
    if (r.variable_lag) out["sim_value"] = json_number(r.sim_value);
    return out;
}

json te_json(const TEReport& r) {
    json out{
        {"te_xy", json_number(r.te_xy)},
        {"te_yx", json_number(r.te_yx)},
        {"ratio", json_number(r.ratio)},
        {"pvalue_xy", json_optional(r.pvalue_xy)},
        {"pvalue_yx", json_optional(r.pvalue_yx)},
        {"cause", r.cause},
    };
    if (r.variable_lag) out["sim_value"] = json_number(r.sim_value);
    return out;
}

int default_delta_max(std::size_t T) {
    return std::max(1, static_cast<int>(std::llround(0.2 * static_cast<double>(T))));
}

struct InferOpts {
    CommonOpts common;
    std::string x_col;
    std::string y_col;
    std::string method = "granger";
    std::string mode = "auto";  // auto | fixed | variable
    Config cfg;
    int delta_max = 0;  // 0 = derive from the series length
};

int cmd_infer(InferOpts& opts, const std::string& command_line) {
    const CsvTable table = read_csv(opts.common.input);
    const TimeSeries x{table.column(opts.x_col)};
    const TimeSeries y{table.column(opts.y_col)};

    Config cfg = opts.cfg;
    cfg.seed = resolve_seed(opts.common);
    cfg.delta_max = opts.delta_max > 0 ? opts.delta_max : default_delta_max(y.size());

    const Method method = opts.method == "te" ? Method::transfer_entropy : Method::granger;

    json out{
        {"schema", "vlcausal-infer-v1"},
        {"mode", opts.mode},
        {"method", method_name(method)},
        {"x", opts.x_col},
        {"y", opts.y_col},
    };

    if (opts.mode == "auto") {
        const CausalVerdict verdict = time_lag_test(x, y, cfg, method);
        out["verdict"] = verdict_name(verdict.kind);
        out["vl_flag"] = verdict.vl_flag;
        if (method == Method::granger) {
            out["fixed_report"] = granger_json(*verdict.fixed_granger);
            out["variable_report"] = granger_json(*verdict.variable_granger);
            out["sim_value"] = json_number(verdict.variable_granger->sim_value);
        } else {
            out["fixed_report"] = te_json(*verdict.fixed_te);
            out["variable_report"] = te_json(*verdict.variable_te);
            out["sim_value"] = json_number(verdict.variable_te->sim_value);
        }
    } else {
        const bool fixed = opts.mode == "fixed";
        if (method == Method::granger) {
            const GrangerReport report = vl_granger(x, y, cfg, fixed);
            out[fixed ? "fixed_report" : "variable_report"] = granger_json(report);
            out["verdict"] = report.cause
                                 ? (fixed ? verdict_name(VerdictKind::true_fixed)
                                          : verdict_name(VerdictKind::true_variable))
                                 : verdict_name(VerdictKind::none);
            if (!fixed) out["sim_value"] = json_number(report.sim_value);
        } else {
            const TEReport report = vl_transfer_entropy(x, y, cfg, fixed);
            out[fixed ? "fixed_report" : "variable_report"] = te_json(report);
            out["verdict"] = report.cause
                                 ? (fixed ? verdict_name(VerdictKind::true_fixed)
                                          : verdict_name(VerdictKind::true_variable))
                                 : verdict_name(VerdictKind::none);
            if (!fixed) out["sim_value"] = json_number(report.sim_value);
        }
    }

    out["manifest"] = manifest_json(command_line, cfg, {opts.common.input});
    write_file(opts.common.output, out.dump(2) + "\n");
    return 0;
}

struct DtwOpts {
    CommonOpts common;
    std::string x_col;
    std::string y_col;
    int delta_max = 0;
};

int cmd_dtw(DtwOpts& opts, const std::string& command_line) {
    const CsvTable table = read_csv(opts.common.input);
    const TimeSeries x{table.column(opts.x_col)};
    const TimeSeries y{table.column(opts.y_col)};

    Config cfg;
    cfg.seed = resolve_seed(opts.common);
    cfg.delta_max = opts.delta_max;  // validated below; 0 is rejected

    const AlignmentResult alignment = reconstruct(x, y, cfg);

    json path = json::array();
    for (const auto& [i, j] : alignment.path.pairs) path.push_back({i, j});

    json out{
        {"schema", "vlcausal-dtw-v1"},
        {"x", opts.x_col},
        {"y", opts.y_col},
        {"distance", json_number(alignment.distance)},
        {"sim_value", json_number(alignment.sim_value)},
        {"delta0", alignment.delta0},
        {"degenerate_xcorr", alignment.degenerate_xcorr},
        {"path", path},
        {"delays", alignment.lag_path.delays},
        {"raw_delays", alignment.raw_delays},
        {"reconstructed", alignment.reconstructed.data()},
        {"manifest", manifest_json(command_line, cfg, {opts.common.input})},
    };
    write_file(opts.common.output, out.dump(2) + "\n");
    return 0;
}

struct SimulateOpts {
    CommonOpts common;
    std::string kind = "pairwise";
    std::string generator = "normal";
    std::string y_generator;
    bool causal = true;
    std::size_t length = 200;
    int delta = 5;
    double noise = 0.1;
    bool no_freeze = false;
};

Generator parse_generator(const std::string& name) {
    if (name == "normal") return Generator::normal;
    if (name == "arma") return Generator::arma;
    throw io_error("unknown generator '" + name + "'");
}

int cmd_simulate(SimulateOpts& opts, const std::string& command_line) {
    Config cfg;
    cfg.seed = resolve_seed(opts.common);
    cfg.delta_max = std::max(1, 2 * opts.delta);  // manifest context only

    if (opts.kind == "pairwise") {
        PairwiseScenario scenario;
        scenario.generator = parse_generator(opts.generator);
        scenario.y_generator =
            opts.y_generator.empty() ? scenario.generator : parse_generator(opts.y_generator);
        scenario.causal = opts.causal;
        scenario.length = opts.length;
        scenario.delta = opts.delta;
        scenario.noise_scale = opts.noise;
        scenario.freeze = !opts.no_freeze;
        scenario.seed = cfg.seed;
        const auto [x, y] = gen_pairwise(scenario);
        write_csv(opts.common.output, {"X", "Y"}, {x.data(), y.data()});
        write_file(opts.common.output + ".manifest.json",
                   manifest_json(command_line, cfg, {}).dump(2) + "\n");
        return 0;
    }

    if (opts.kind == "group") {
        const GroupData group =
            gen_group(parse_generator(opts.generator), cfg.seed, opts.length, opts.delta, opts.noise);
        std::vector<std::string> header;
        std::vector<std::vector<double>> columns;
        for (const auto& [name, series] : group.members) {
            header.push_back(name);
            columns.push_back(series.data());
        }
        write_csv(opts.common.output, header, columns);
        write_file(opts.common.output + ".manifest.json",
                   manifest_json(command_line, cfg, {}).dump(2) + "\n");
        return 0;
    }

    if (opts.kind == "suite") {
        fs::create_directories(opts.common.output);
        const std::vector<LabeledPair> suite = gen_benchmark_suite(cfg.seed);
        std::string labels = "file,causal\n";
        for (const LabeledPair& pair : suite) {
            const std::string file = pair.name + ".csv";
            write_csv((fs::path(opts.common.output) / file).string(), {"X", "Y"},
                      {pair.x.data(), pair.y.data()});
            labels += file + "," + (pair.causal ? "1" : "0") + "\n";
        }
        write_file((fs::path(opts.common.output) / "labels.csv").string(), labels);
        write_file((fs::path(opts.common.output) / "manifest.json").string(),
                   manifest_json(command_line, cfg, {}).dump(2) + "\n");
        return 0;
    }

    throw io_error("unknown simulation kind '" + opts.kind + "'");
}

struct BenchOpts {
    CommonOpts common;
    std::string suite_dir;
    std::string methods = "vlg,g,vlte,te";
    std::string fracs = "0.1,0.2,0.3,0.4";
    Config cfg;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item.push_back(c);
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<LabeledPair> load_suite(const std::string& dir) {
    const fs::path labels_path = fs::path(dir) / "labels.csv";
    if (!fs::exists(labels_path)) throw io_error("no labels.csv under '" + dir + "'");
    const std::string labels = read_file(labels_path.string());

    std::vector<LabeledPair> suite;
    std::istringstream stream(labels);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty() || line_no == 1) continue;  // header
        const auto comma = line.find_last_of(',');
        if (comma == std::string::npos)
            throw io_error(labels_path.string() + ":" + std::to_string(line_no) + ": bad row");
        const std::string file = line.substr(0, comma);
        const std::string flag = line.substr(comma + 1);
        const CsvTable table = read_csv((fs::path(dir) / file).string());
        LabeledPair pair;
        pair.name = file;
        pair.x = TimeSeries(table.column("X"));
        pair.y = TimeSeries(table.column("Y"));
        pair.causal = flag == "1" || flag == "true";
        suite.push_back(std::move(pair));
    }
    if (suite.empty()) throw io_error("suite under '" + dir + "' is empty");
    return suite;
}

int cmd_bench(BenchOpts& opts, const std::string& command_line) {
    const std::vector<LabeledPair> suite = load_suite(opts.suite_dir);
    Config cfg = opts.cfg;
    cfg.seed = resolve_seed(opts.common);

    std::vector<BenchMethod> methods;
    for (const std::string& name : split_list(opts.methods)) {
        const auto method = bench_method_from_name(name);
        if (!method) throw io_error("unknown method '" + name + "'");
        methods.push_back(*method);
    }
    std::vector<double> fractions;
    for (const std::string& item : split_list(opts.fracs)) fractions.push_back(std::stod(item));
    if (methods.empty() || fractions.empty()) throw io_error("nothing to benchmark");

    const std::vector<std::string> header = {"method", "delta_max_frac", "accuracy", "tpr",
                                             "fpr",    "auc",            "precision", "recall",
                                             "f1",     "wall_ms"};
    std::string csv;
    for (const std::string& h : header) {
        if (!csv.empty()) csv.push_back(',');
        csv += h;
    }
    csv.push_back('\n');

    const auto cell = [](const std::optional<double>& v) {
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.10g", v ? *v : std::nan(""));
        return std::string(buffer);
    };

    for (BenchMethod method : methods) {
        for (double fraction : fractions) {
            const auto start = std::chrono::steady_clock::now();
            std::vector<bool> predicted;
            std::vector<bool> truth;
            std::vector<double> scores;
            for (const LabeledPair& pair : suite) {
                Config local = cfg;
                local.delta_max = std::max(
                    1, static_cast<int>(fraction * static_cast<double>(pair.x.size())));
                const BenchDecision decision = bench_decide(method, pair.x, pair.y, local);
                predicted.push_back(decision.predicted);
                scores.push_back(decision.decision_score);
                truth.push_back(pair.causal);
            }
            const Metrics metrics = score(predicted, truth);
            const RocResult roc = roc_auc(scores, truth);
            const auto stop = std::chrono::steady_clock::now();
            const double wall_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();

            csv += std::string(bench_method_name(method)) + "," + cell(fraction) + "," +
                   cell(metrics.accuracy) + "," + cell(metrics.tpr) + "," + cell(metrics.fpr) +
                   "," + cell(roc.auc) + "," + cell(metrics.precision) + "," +
                   cell(metrics.recall) + "," + cell(metrics.f1) + "," + cell(wall_ms) + "\n";
        }
    }
    write_file(opts.common.output, csv);
    write_file(opts.common.output + ".manifest.json",
               manifest_json(command_line, cfg, {}).dump(2) + "\n");
    return 0;
}

void add_config_flags(CLI::App* app, Config& cfg) {
    app->add_option("--gamma", cfg.gamma, "BIC difference ratio threshold");
    app->add_option("--alpha", cfg.alpha, "significance level");
    app->add_option("--sigma", cfg.sigma, "emulation similarity threshold");
    app->add_flag("--sim-gate,!--no-sim-gate", cfg.sim_gate,
                  "require sim_value >= sigma for variable-lag Granger causes (default on)");
    app->add_option("--nboot", cfg.nboot, "bootstrap replicates (0 disables)");
    app->add_option("--te-k", cfg.te_k, "target history length");
    app->add_option("--te-l", cfg.te_l, "source history length");
    app->add_option("--te-bins", cfg.te_bins.bins, "discretization bins");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"variable-lag causality toolkit"};
    app.require_subcommand(1);

    const std::string command_line = "vlcausal " + join_args(args);

    InferOpts infer;
    CLI::App* infer_cmd = app.add_subcommand("infer", "pairwise causal inference on CSV columns");
    infer_cmd->add_option("--input", infer.common.input, "input CSV")->required();
    infer_cmd->add_option("--output", infer.common.output, "output JSON")->required();
    infer_cmd->add_option("--x", infer.x_col, "cause column")->required();
    infer_cmd->add_option("--y", infer.y_col, "effect column")->required();
    infer_cmd->add_option("--method", infer.method, "granger|te")
        ->check(CLI::IsMember({"granger", "te"}));
    infer_cmd->add_option("--delta-max", infer.delta_max,
                          "maximum lag (default: 20% of the series length)");
    infer_cmd->add_option("--seed", infer.common.seed, "RNG seed")
        ->each([&infer](const std::string&) { infer.common.seed_given = true; });
    infer_cmd->add_option("--criterion",
                          [&infer](const std::vector<std::string>& values) {
                              infer.cfg.granger_criterion = values.front() == "ftest"
                                                                ? GrangerCriterion::f_test
                                                                : GrangerCriterion::bic_ratio;
                              return true;
                          },
                          "granger decision criterion: bic|ftest")
        ->expected(1);
    auto* auto_flag = infer_cmd->add_flag("--auto", "run both fixed- and variable-lag (default)");
    auto* fixed_flag = infer_cmd->add_flag("--fixed-lag", "fixed-lag branch only");
    auto* variable_flag = infer_cmd->add_flag("--variable-lag", "variable-lag branch only");
    auto_flag->excludes(fixed_flag)->excludes(variable_flag);
    fixed_flag->excludes(variable_flag);
    add_config_flags(infer_cmd, infer.cfg);

    DtwOpts dtw;
    CLI::App* dtw_cmd = app.add_subcommand("dtw", "alignment dump for two CSV columns");
    dtw_cmd->add_option("--input", dtw.common.input, "input CSV")->required();
    dtw_cmd->add_option("--output", dtw.common.output, "output JSON")->required();
    dtw_cmd->add_option("--x", dtw.x_col, "cause column")->required();
    dtw_cmd->add_option("--y", dtw.y_col, "effect column")->required();
    dtw_cmd->add_option("--delta-max", dtw.delta_max, "maximum lag and band width")->required();
    dtw_cmd->add_option("--seed", dtw.common.seed, "RNG seed")
        ->each([&dtw](const std::string&) { dtw.common.seed_given = true; });

    SimulateOpts sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "write synthetic benchmark data");
    sim_cmd->add_option("--kind", sim.kind, "pairwise|group|suite")
        ->check(CLI::IsMember({"pairwise", "group", "suite"}));
    sim_cmd->add_option("--output", sim.common.output, "output CSV file or suite directory")
        ->required();
    sim_cmd->add_option("--generator", sim.generator, "normal|arma")
        ->check(CLI::IsMember({"normal", "arma"}));
    sim_cmd->add_option("--y-generator", sim.y_generator,
                        "generator for an independent effect (defaults to --generator)");
    sim_cmd->add_option("--causal", sim.causal, "true|false");
    sim_cmd->add_option("--length", sim.length, "series length");
    sim_cmd->add_option("--delta", sim.delta, "base lag");
    sim_cmd->add_option("--noise", sim.noise, "effect noise scale");
    sim_cmd->add_flag("--no-freeze", sim.no_freeze, "disable the constant window");
    sim_cmd->add_option("--seed", sim.common.seed, "RNG seed")
        ->each([&sim](const std::string&) { sim.common.seed_given = true; });

    BenchOpts bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "evaluate methods over a simulated suite");
    bench_cmd->add_option("--suite", bench.suite_dir, "suite directory from `simulate --kind suite`")
        ->required();
    bench_cmd->add_option("--output", bench.common.output, "metrics CSV")->required();
    bench_cmd->add_option("--methods", bench.methods, "comma list of vlg,g,vlte,te");
    bench_cmd->add_option("--delta-max-fracs", bench.fracs, "comma list of fractions of T");
    bench_cmd->add_option("--seed", bench.common.seed, "RNG seed")
        ->each([&bench](const std::string&) { bench.common.seed_given = true; });
    add_config_flags(bench_cmd, bench.cfg);

    std::vector<const char*> argv;
    argv.push_back("vlcausal");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (*fixed_flag) infer.mode = "fixed";
        if (*variable_flag) infer.mode = "variable";
        if (*infer_cmd) return cmd_infer(infer, command_line);
        if (*dtw_cmd) return cmd_dtw(dtw, command_line);
        if (*sim_cmd) return cmd_simulate(sim, command_line);
        if (*bench_cmd) return cmd_bench(bench, command_line);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace vlc::cli
