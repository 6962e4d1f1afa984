// memwall: analytical FLOP/MOP counting, roofline latency estimates,
// hardware scaling-trend fits, and training-memory models for Transformer
// workloads. All data goes to stdout, diagnostics to stderr.
//
// Exit codes: 0 success, 2 I/O error, 3 validation/parse error,
// 4 count overflow.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memwall/memwall.hpp"

namespace {

using namespace memwall;

struct OutputOptions {
    std::string format = "csv";
    std::string emit;  // "gnuplot-data" or empty
};

struct WorkloadOptions {
    std::string seq = "128";
    std::uint64_t batch = 1;
    std::string precision = "int8";
    bool elementwise = false;
    bool embeddings = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--emit", out.emit,
                    "gnuplot-data: CSV with a commented column header")
        ->check(CLI::IsMember({"gnuplot-data"}));
}

void add_workload_flags(CLI::App* cmd, WorkloadOptions& wl) {
    cmd->add_option("--seq", wl.seq, "Sequence length(s), comma separated")
        ->capture_default_str();
    cmd->add_option("--batch", wl.batch, "Batch size")->capture_default_str();
    cmd->add_option("--precision", wl.precision, "Element storage precision")
        ->check(CLI::IsMember({"int8", "fp16", "fp32"}))
        ->capture_default_str();
    cmd->add_flag("--elementwise", wl.elementwise,
                  "Count softmax/layer-norm/GELU/residual kernels");
    cmd->add_flag("--embeddings", wl.embeddings,
                  "Count embedding lookups and the LM head");
}

std::vector<std::uint64_t> parse_seq_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(start, comma - start);
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("invalid --seq entry '" + item + "'");
        }
        start = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty()) throw ValidationError("--seq list is empty");
    return out;
}

Workload make_workload(const WorkloadOptions& opts, std::uint64_t seq) {
    Workload wl;
    wl.seq_len = seq;
    wl.batch = opts.batch;
    wl.precision = precision_from_name(opts.precision);
    wl.elementwise_counting = opts.elementwise;
    wl.include_embeddings = opts.embeddings;
    return validated(wl);
}

// A model argument is a file path when it exists on disk; otherwise it must
// be one of the built-in preset names.
TransformerConfig resolve_model(const std::string& arg, Digest& digest) {
    if (std::filesystem::exists(arg)) {
        const std::string text = read_file(arg);
        digest.feed("model-file:").feed(text);
        return load_config(text);
    }
    if (is_preset_name(arg)) {
        digest.feed("preset:").feed(arg);
        return preset(arg);
    }
    throw IoError("model file not found: " + arg + " (and not a preset name)");
}

ArchClass resolve_mode(const TransformerConfig& cfg, const std::string& flag) {
    if (flag.empty()) return cfg.arch_class;
    if (flag == "encoder") return ArchClass::encoder;
    if (flag == "decoder") return ArchClass::decoder;
    throw ValidationError("--mode must be encoder or decoder");
}

void feed_workload(Digest& digest, const WorkloadOptions& wl) {
    digest.feed("seq:").feed(wl.seq);
    digest.feed("batch:").feed(std::to_string(wl.batch));
    digest.feed("precision:").feed(wl.precision);
    digest.feed(wl.elementwise ? "elementwise:on" : "elementwise:off");
    digest.feed(wl.embeddings ? "embeddings:on" : "embeddings:off");
}

void emit_report(const Report& report, const OutputOptions& out) {
    const std::string text = out.format == "json"
                                 ? to_json(report)
                                 : to_csv(report, out.emit == "gnuplot-data");
    std::fwrite(text.data(), 1, text.size(), stdout);
}

// ---------------------------------------------------------------------------
// analyze: FLOPs / MOPs / arithmetic intensity per sequence length.
// ---------------------------------------------------------------------------
struct AnalyzeArgs {
    std::string model;
    std::string mode;
    WorkloadOptions workload;
    bool per_layer = false;
    OutputOptions output;
};

void run_analyze(const AnalyzeArgs& args) {
    Digest digest;
    digest.feed("analyze:");
    const TransformerConfig cfg = resolve_model(args.model, digest);
    const ArchClass mode = resolve_mode(cfg, args.mode);
    feed_workload(digest, args.workload);
    digest.feed("mode:").feed(to_string(mode));
    digest.feed(args.per_layer ? "per_layer:on" : "per_layer:off");

    Report report;
    report.command = "analyze";
    report.inputs_digest = digest.hex();
    if (args.per_layer) {
        report.columns = {"seq_len", "kernel", "flops", "mops", "weight_mops"};
    } else {
        report.columns = {"seq_len", "total_flops", "total_mops",
                          "arithmetic_intensity"};
    }
    for (const std::uint64_t seq : parse_seq_list(args.workload.seq)) {
        const Workload wl = make_workload(args.workload, seq);
        const CostBreakdown cost = inference_cost(cfg, wl, mode);
        if (args.per_layer) {
            for (const auto& kernel : cost.kernels) {
                report.rows.push_back({seq, kernel.kernel_name, kernel.flops,
                                       kernel.mops, kernel.weight_mops});
            }
        } else {
            report.rows.push_back({seq, cost.total_flops, cost.total_mops,
                                   cost.arithmetic_intensity});
        }
    }
    emit_report(report, args.output);
}

// ---------------------------------------------------------------------------
// roofline: latency estimates against hardware; normalized to the first
// model at each (device, seq) grouping.
// ---------------------------------------------------------------------------
struct RooflineArgs {
    std::vector<std::string> models;
    std::string hardware_file;
    std::string device;
    std::string mode;
    WorkloadOptions workload;
    OutputOptions output;
};

void run_roofline(const RooflineArgs& args) {
    Digest digest;
    digest.feed("roofline:");
    std::vector<TransformerConfig> configs;
    configs.reserve(args.models.size());
    for (const auto& m : args.models) {
        configs.push_back(resolve_model(m, digest));
    }
    const std::string hw_text = read_file(args.hardware_file);
    digest.feed("hardware:").feed(hw_text);
    std::vector<HardwareSpec> devices = load_hardware(hw_text);
    if (!args.device.empty()) {
        std::vector<HardwareSpec> filtered;
        for (auto& hw : devices) {
            if (hw.name == args.device) filtered.push_back(hw);
        }
        if (filtered.empty()) {
            throw LookupError("device '" + args.device +
                              "' not present in hardware file");
        }
        devices = std::move(filtered);
        digest.feed("device:").feed(args.device);
    }
    feed_workload(digest, args.workload);
    digest.feed("mode:").feed(args.mode);

    Report report;
    report.command = "roofline";
    report.inputs_digest = digest.hex();
    report.columns = {"device",       "model",   "seq_len",
                      "compute_time", "memory_time", "latency",
                      "bound",        "normalized_latency"};
    for (const auto& hw : devices) {
        for (const std::uint64_t seq : parse_seq_list(args.workload.seq)) {
            const Workload wl = make_workload(args.workload, seq);
            std::vector<RooflineEstimate> estimates;
            estimates.reserve(configs.size());
            for (const auto& cfg : configs) {
                const ArchClass mode = resolve_mode(cfg, args.mode);
                estimates.push_back(
                    estimate_latency(inference_cost(cfg, wl, mode), hw));
            }
            const std::vector<double> normalized = normalized_latency(estimates, 0);
            for (std::size_t i = 0; i < configs.size(); ++i) {
                report.rows.push_back({hw.name, configs[i].name, seq,
                                       estimates[i].compute_time,
                                       estimates[i].memory_time,
                                       estimates[i].latency,
                                       to_string(estimates[i].bound),
                                       normalized[i]});
            }
        }
    }
    emit_report(report, args.output);
}

// ---------------------------------------------------------------------------
// trends: exponential growth-rate fits over a trend CSV.
// ---------------------------------------------------------------------------
struct TrendsArgs {
    std::string csv_file;
    std::string metric = "all";
    std::optional<double> from_year;
    std::optional<double> to_year;
    std::string exclude_tag;
    OutputOptions output;
};

void run_trends(const TrendsArgs& args) {
    Digest digest;
    digest.feed("trends:");
    const std::string text = read_file(args.csv_file);
    digest.feed(text);
    digest.feed("metric:").feed(args.metric);
    if (args.from_year) digest.feed("from:").feed(format_double(*args.from_year));
    if (args.to_year) digest.feed("to:").feed(format_double(*args.to_year));
    digest.feed("exclude_tag:").feed(args.exclude_tag);

    std::vector<TrendSeries> database = load_trend_csv(text);
    if (args.metric != "all") {
        // Validate the name against the unfiltered database first so an
        // unknown metric fails loudly rather than as an empty filter result.
        database = {find_series(database, args.metric)};
    }
    database = filter_series(database, args.from_year, args.to_year,
                             args.exclude_tag);
    if (database.empty()) {
        throw ValidationError("no trend rows left after filtering");
    }

    Report report;
    report.command = "trends";
    report.inputs_digest = digest.hex();
    report.columns = {"metric", "rate_per_2yr", "r_squared", "factor_over_20yr"};
    for (const auto& row : headline_rates(database)) {
        if (!row.fit) {
            std::fprintf(stderr, "memwall: skipping metric '%s': %s\n",
                         row.metric_name.c_str(), row.error.c_str());
            continue;
        }
        report.rows.push_back({row.metric_name, row.fit->rate_per_2yr,
                               row.fit->r_squared, factor_over(*row.fit, 20.0)});
    }
    emit_report(report, args.output);
}

// ---------------------------------------------------------------------------
// memory: training footprint and the checkpointing trade-off.
// ---------------------------------------------------------------------------
struct MemoryArgs {
    std::string model;
    std::string optimizer = "adam";
    std::uint64_t param_bytes = 4;
    std::uint64_t state_bytes = 4;
    std::uint64_t linear_tensors = kLinearTensorsPerLayer;
    std::optional<std::uint64_t> checkpoint_every;
    bool checkpoint_sweep = false;
    WorkloadOptions workload;
    OutputOptions output;
};

void run_memory(const MemoryArgs& args) {
    Digest digest;
    digest.feed("memory:");
    const TransformerConfig cfg = resolve_model(args.model, digest);
    const OptimizerKind opt = optimizer_from_name(args.optimizer);
    feed_workload(digest, args.workload);
    digest.feed("optimizer:").feed(args.optimizer);
    digest.feed("param_bytes:").feed(std::to_string(args.param_bytes));
    digest.feed("state_bytes:").feed(std::to_string(args.state_bytes));
    digest.feed("linear_tensors:").feed(std::to_string(args.linear_tensors));
    if (args.checkpoint_every) {
        digest.feed("checkpoint_every:")
            .feed(std::to_string(*args.checkpoint_every));
    }
    digest.feed(args.checkpoint_sweep ? "sweep:on" : "sweep:off");

    Report report;
    report.command = "memory";
    report.inputs_digest = digest.hex();
    if (args.checkpoint_sweep) {
        report.columns = {"seq_len", "every_k", "activation_bytes",
                          "recompute_overhead"};
        for (const std::uint64_t seq : parse_seq_list(args.workload.seq)) {
            const Workload wl = make_workload(args.workload, seq);
            for (const auto& point :
                 checkpoint_tradeoff(cfg, wl, args.linear_tensors)) {
                report.rows.push_back({seq, point.every_k,
                                       point.activation_bytes,
                                       point.recompute_overhead});
            }
        }
    } else {
        report.columns = {"seq_len",         "weights",    "gradients",
                          "optimizer_state", "activations", "total"};
        if (args.checkpoint_every) {
            report.columns.push_back("checkpointed_bytes");
            report.columns.push_back("recompute_overhead");
        }
        for (const std::uint64_t seq : parse_seq_list(args.workload.seq)) {
            const Workload wl = make_workload(args.workload, seq);
            const MemoryFootprint fp =
                footprint(cfg, wl, opt, args.param_bytes, args.state_bytes,
                          args.linear_tensors);
            std::vector<Cell> row{seq,           fp.weights, fp.gradients,
                                  fp.optimizer_state, fp.activations, fp.total};
            if (args.checkpoint_every) {
                row.emplace_back(checkpointed_bytes(cfg, wl,
                                                    *args.checkpoint_every,
                                                    args.linear_tensors));
                row.emplace_back(recompute_overhead(cfg, *args.checkpoint_every));
            }
            report.rows.push_back(std::move(row));
        }
    }
    emit_report(report, args.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytical performance model for Transformer inference and "
                 "training: FLOP/MOP accounting, roofline latency, hardware "
                 "scaling trends, and training memory footprints."};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand(
        "analyze", "Count FLOPs, MOPs and arithmetic intensity");
    analyze->add_option("model", analyze_args.model,
                        "Model file or preset name (bert-base, bert-large, gpt2)")
        ->required();
    analyze->add_option("--mode", analyze_args.mode,
                        "Pass type; defaults to the model's arch_class")
        ->check(CLI::IsMember({"encoder", "decoder"}));
    analyze->add_flag("--per-layer", analyze_args.per_layer,
                      "One row per kernel instead of totals");
    add_workload_flags(analyze, analyze_args.workload);
    add_output_flags(analyze, analyze_args.output);
    analyze->callback([&] { run_analyze(analyze_args); });

    RooflineArgs roofline_args;
    auto* roofline = app.add_subcommand(
        "roofline", "Estimate latency against a hardware specification");
    roofline->add_option("models", roofline_args.models,
                         "Model files or preset names; first is the baseline")
        ->required();
    roofline->add_option("--hardware", roofline_args.hardware_file,
                         "Hardware CSV or JSON document")
        ->required();
    roofline->add_option("--device", roofline_args.device,
                         "Restrict to one device by name");
    roofline->add_option("--mode", roofline_args.mode,
                         "Force pass type for all models")
        ->check(CLI::IsMember({"encoder", "decoder"}));
    add_workload_flags(roofline, roofline_args.workload);
    add_output_flags(roofline, roofline_args.output);
    roofline->callback([&] { run_roofline(roofline_args); });

    TrendsArgs trends_args;
    auto* trends = app.add_subcommand(
        "trends", "Fit exponential growth rates over a trend CSV");
    trends->add_option("csv", trends_args.csv_file, "Trend CSV file")->required();
    trends->add_option("--metric", trends_args.metric,
                       "Metric name, or 'all'")
        ->capture_default_str();
    double from_year = 0.0, to_year = 0.0;
    auto* from_opt = trends->add_option("--from", from_year,
                                        "Keep rows with year >= this");
    auto* to_opt = trends->add_option("--to", to_year,
                                      "Keep rows with year <= this");
    trends->add_option("--exclude-tag", trends_args.exclude_tag,
                       "Drop rows carrying this tag");
    add_output_flags(trends, trends_args.output);
    trends->callback([&] {
        if (from_opt->count() > 0) trends_args.from_year = from_year;
        if (to_opt->count() > 0) trends_args.to_year = to_year;
        run_trends(trends_args);
    });

    MemoryArgs memory_args;
    auto* memory = app.add_subcommand(
        "memory", "Training memory footprint and checkpointing trade-off");
    memory->add_option("model", memory_args.model,
                       "Model file or preset name")
        ->required();
    memory->add_option("--optimizer", memory_args.optimizer,
                       "Optimizer state model")
        ->check(CLI::IsMember({"sgd", "sgd_momentum", "adam"}))
        ->capture_default_str();
    memory->add_option("--param-bytes", memory_args.param_bytes,
                       "Bytes per weight/gradient element")
        ->capture_default_str();
    memory->add_option("--state-bytes", memory_args.state_bytes,
                       "Bytes per optimizer-state element")
        ->capture_default_str();
    memory->add_option("--linear-tensors", memory_args.linear_tensors,
                       "Retained linear-path tensors per layer")
        ->capture_default_str();
    std::uint64_t checkpoint_every = 0;
    auto* ck_opt = memory->add_option("--checkpoint-every", checkpoint_every,
                                      "Checkpoint boundary every K layers");
    memory->add_flag("--checkpoint-sweep", memory_args.checkpoint_sweep,
                     "Emit the full k -> (bytes, overhead) table");
    add_workload_flags(memory, memory_args.workload);
    add_output_flags(memory, memory_args.output);
    memory->callback([&] {
        if (ck_opt->count() > 0) memory_args.checkpoint_every = checkpoint_every;
        run_memory(memory_args);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "memwall: %s\n", e.what());
        return 2;
    } catch (const OverflowError& e) {
        std::fprintf(stderr, "memwall: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "memwall: %s\n", e.what());
        return 3;
    }
    return 0;
}
