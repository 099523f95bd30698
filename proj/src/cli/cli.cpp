#include "pccdr/cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "pccdr/datasets.hpp"
#include "pccdr/errors.hpp"
#include "pccdr/io.hpp"
#include "pccdr/metrics.hpp"
#include "pccdr/parallel.hpp"
#include "pccdr/pca.hpp"
#include "pccdr/plot.hpp"
#include "pccdr/preprocess.hpp"
#include "pccdr/trainer.hpp"

namespace pccdr::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Argument problems detected after CLI11 accepted the syntax.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const auto end = text.find(sep, begin);
        parts.push_back(text.substr(begin, end - begin));
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    return parts;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw UsageError(std::string("invalid ") + what + ": '" + s + "'");
    }
    return v;
}

std::vector<std::size_t> parse_cluster_counts(const std::string& text) {
    if (text == "none") return {};
    std::vector<std::size_t> counts;
    for (const auto& part : split(text, ',')) {
        const auto v = parse_u64(part, "cluster count");
        if (v == 0) throw UsageError("cluster counts must be positive");
        counts.push_back(static_cast<std::size_t>(v));
    }
    return counts;
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

// --- shared flag groups ---------------------------------------------------

struct InputFlags {
    std::string path;
    std::string format = "csv";
    bool header = false;
    long label_column = -1;
    bool standardize = false;
};

CLI::Option* add_input_flags(CLI::App* cmd, InputFlags& f, bool required) {
    auto* opt = cmd->add_option("--input", f.path, "Data matrix (rows = points)");
    if (required) opt->required();
    cmd->add_option("--format", f.format, "csv | raw-f32")
        ->check(CLI::IsMember({"csv", "raw-f32"}));
    cmd->add_flag("--header", f.header, "CSV has a header line");
    cmd->add_option("--label-column", f.label_column, "0-based integer label column (CSV)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--standardize", f.standardize, "Z-score each column before use");
    return opt;
}

LoadOptions load_options(const InputFlags& f) {
    LoadOptions o;
    o.format = parse_matrix_format(f.format);
    o.has_header = f.header;
    if (f.label_column >= 0) o.label_column = static_cast<std::size_t>(f.label_column);
    return o;
}

DataMatrix load_input(const std::string& path, const InputFlags& f) {
    DataMatrix data = load_matrix(path, load_options(f));
    return f.standardize ? standardize(data) : data;
}

struct FitFlags {
    std::size_t dim = 2;
    std::size_t k_refs = 100;
    double beta = PccConfig{}.beta;
    std::string clusters = "4,8,16,32,64";
    double epsilon = PccConfig{}.epsilon;
    std::size_t iters = 500;
    double lr = 0.05;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
    cmd->add_option("--dim", f.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--k-refs", f.k_refs, "Reference points per row")->check(CLI::PositiveNumber);
    cmd->add_option("--beta", f.beta, "Correlation loss weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--clusters", f.clusters, "Comma-separated k-means counts, or 'none'");
    cmd->add_option("--epsilon", f.epsilon, "Soft-rank regularization")->check(CLI::PositiveNumber);
    cmd->add_option("--iters", f.iters, "Adam iterations");
    cmd->add_option("--lr", f.lr, "Adam learning rate")->check(CLI::PositiveNumber);
}

PccConfig make_pcc_config(const FitFlags& f, std::uint64_t seed) {
    PccConfig c;
    c.out_dim = f.dim;
    c.k_refs = f.k_refs;
    c.beta = f.beta;
    c.cluster_counts = parse_cluster_counts(f.clusters);
    c.epsilon = f.epsilon;
    c.iters = f.iters;
    c.learning_rate = f.lr;
    c.seed = RunSeed{seed};
    return c;
}

json report_json(const FitReport& report, bool no_timing) {
    json j = to_json(report);
    if (no_timing) j["wall_ms"] = 0.0;
    return j;
}

// --- commands -------------------------------------------------------------

struct FitArgs {
    InputFlags input;
    FitFlags fit;
    std::string out;
    std::string report;
    std::uint64_t seed = 0;
    bool no_timing = false;
};

void cmd_fit(const FitArgs& a, std::ostream& out) {
    const PccConfig config = make_pcc_config(a.fit, a.seed);
    const DataMatrix data = load_input(a.input.path, a.input);
    const auto [emb, report] = fit_pcc(data, config);
    emit(a.out, format_embedding_csv(emb), out);
    if (!a.report.empty()) write_text_file(a.report, report_json(report, a.no_timing).dump(2) + "\n");
}

struct RefineArgs {
    InputFlags input;
    std::string init;
    std::string out;
    std::string report;
    RefineConfig config;
    std::uint64_t seed = 0;
    bool no_timing = false;
};

void cmd_refine(RefineArgs a, std::ostream& out) {
    a.config.seed = RunSeed{a.seed};
    const DataMatrix data = load_input(a.input.path, a.input);
    const Embedding init = load_embedding(a.init);
    const auto [emb, report] = refine_from_init(data, init, a.config);
    emit(a.out, format_embedding_csv(emb), out);
    if (!a.report.empty()) write_text_file(a.report, report_json(report, a.no_timing).dump(2) + "\n");
}

struct EvaluateArgs {
    InputFlags input;
    std::string embedding;
    std::string out;
    std::size_t k = kDefaultMetricK;
    std::size_t max_pairs = kDefaultMaxPairs;
    std::uint64_t seed = 0;
};

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const DataMatrix data = load_input(a.input.path, a.input);
    const Embedding emb = load_embedding(a.embedding);
    const MetricReport report = evaluate(data.points, emb, {a.k, a.max_pairs, RunSeed{a.seed}});
    emit(a.out, to_json(report).dump(2) + "\n", out);
}

struct BenchmarkArgs {
    InputFlags input;  // format flags for file: datasets
    FitFlags fit;
    std::string dataset;
    std::string methods = "pcc,pca";
    std::string seeds = "0";
    std::string out;
    std::string summary;
    std::size_t n = 0;  // 0 = dataset default
    double noise = 0.0;
    std::size_t centers = 8;
    std::size_t blob_dim = 30;
    double blob_std = 1.0;
    double half_width = 10.0;
    std::uint64_t data_seed = 0;
    std::size_t metric_k = kDefaultMetricK;
    std::size_t max_pairs = kDefaultMaxPairs;
    bool no_timing = false;
};

struct Method {
    std::string name;
    std::string kind;  // pcc | pca | random | external
    std::string path;
};

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    for (const auto& part : split(text, ',')) {
        if (part == "pcc" || part == "pca" || part == "random") {
            methods.push_back({part, part, {}});
        } else if (part.rfind("external:", 0) == 0) {
            const std::string spec = part.substr(9);
            const auto eq = spec.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
                throw UsageError("external methods are written external:<name>=<embedding.csv>");
            }
            methods.push_back({spec.substr(0, eq), "external", spec.substr(eq + 1)});
        } else {
            throw UsageError("unknown method '" + part + "'");
        }
    }
    return methods;
}

const char* const kMetricNames[] = {"trustworthiness", "continuity",      "mrre_false", "mrre_missing",
                                    "pearson_global",  "spearman_global", "ls_avg",     "gs_avg"};

std::array<double, 8> metric_values(const MetricReport& r) {
    return {r.trustworthiness, r.continuity,      r.mrre_false, r.mrre_missing,
            r.pearson_global,  r.spearman_global, r.ls_avg,     r.gs_avg};
}

void cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
    const auto methods = parse_methods(a.methods);
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split(a.seeds, ',')) seeds.push_back(parse_u64(s, "seed"));

    DataMatrix data;
    std::string dataset_name = a.dataset;
    if (a.dataset == "swissroll") {
        data = make_swiss_roll(a.n ? a.n : 2000, a.noise, RunSeed{a.data_seed});
    } else if (a.dataset == "blobs") {
        const Matrix centers =
            random_centers(a.centers, a.blob_dim, a.half_width, RunSeed{a.data_seed});
        data = make_blobs(a.n ? a.n : 1500, centers, a.blob_std, RunSeed{a.data_seed});
    } else if (a.dataset.rfind("file:", 0) == 0) {
        const std::string path = a.dataset.substr(5);
        if (path.empty()) throw UsageError("file: dataset needs a path");
        data = load_matrix(path, load_options(a.input));
        dataset_name = std::filesystem::path(path).stem().string();
    } else {
        throw UsageError("unknown dataset '" + a.dataset + "' (swissroll, blobs, file:<path>)");
    }
    if (a.input.standardize) data = standardize(data);
    const PccConfig base = make_pcc_config(a.fit, 0);

    std::string csv = "dataset,method,seed";
    for (const char* m : kMetricNames) csv += std::string(",") + m;
    csv += ",wall_ms\n";
    json rows = json::array();
    std::map<std::string, std::array<double, 9>> sums;  // 8 metrics + wall_ms
    std::vector<std::string> order;

    for (const auto& method : methods) {
        // External embeddings do not depend on the seed; load them once.
        Embedding external;
        if (method.kind == "external") external = load_embedding(method.path);
        if (!sums.count(method.name)) order.push_back(method.name);
        auto& acc = sums[method.name];
        for (const auto seed : seeds) {
            const auto start = Clock::now();
            Embedding emb;
            if (method.kind == "pcc") {
                PccConfig c = base;
                c.seed = RunSeed{seed};
                emb = fit_pcc(data, c).first;
            } else if (method.kind == "pca") {
                emb = pca_fit_transform(data.points, a.fit.dim).second;
            } else if (method.kind == "random") {
                emb = init_random_normal(data.points.rows(), a.fit.dim, RunSeed{seed});
            } else {
                emb = external;
            }
            double wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            if (a.no_timing || method.kind == "external") wall_ms = 0.0;

            const MetricReport r = evaluate(data.points, emb, {a.metric_k, a.max_pairs, RunSeed{seed}});
            const auto values = metric_values(r);
            csv += dataset_name + "," + method.name + "," + std::to_string(seed);
            json row = {{"dataset", dataset_name}, {"method", method.name}, {"seed", seed}};
            for (std::size_t i = 0; i < values.size(); ++i) {
                csv += "," + fmt(values[i]);
                row[kMetricNames[i]] = values[i];
                acc[i] += values[i];
            }
            csv += "," + fmt(wall_ms) + "\n";
            row["wall_ms"] = wall_ms;
            acc[8] += wall_ms;
            rows.push_back(std::move(row));
        }
    }

    json means = json::object();
    for (const auto& name : order) {
        json m = json::object();
        for (std::size_t i = 0; i < 8; ++i) m[kMetricNames[i]] = sums[name][i] / seeds.size();
        m["wall_ms"] = sums[name][8] / seeds.size();
        means[name] = std::move(m);
    }
    const json summary = {{"dataset", dataset_name},
                          {"n", data.points.rows()},
                          {"dim", data.points.cols()},
                          {"seeds", seeds},
                          {"metric_k", a.metric_k},
                          {"rows", rows},
                          {"means", means}};

    emit(a.out, csv, out);
    std::string summary_path = a.summary;
    if (summary_path.empty() && !a.out.empty()) {
        summary_path = std::filesystem::path(a.out).replace_extension(".json").string();
    }
    if (!summary_path.empty()) write_text_file(summary_path, summary.dump(2) + "\n");
}

struct PlotArgs {
    std::string embedding;
    std::string labels;
    long distance_from = -1;
    InputFlags input;
    std::string out;
    std::string rgb_out;
};

std::vector<std::int64_t> load_labels(const std::string& path) {
    const DataMatrix m = load_matrix(path);
    if (m.points.cols() != 1) throw InvalidInput("labels file must have exactly one column");
    std::vector<std::int64_t> labels;
    labels.reserve(m.points.rows());
    for (std::size_t i = 0; i < m.points.rows(); ++i) {
        const double v = m.points(i, 0);
        if (v != std::floor(v)) throw ValueError("label on line " + std::to_string(i + 1) + " is not an integer");
        labels.push_back(static_cast<std::int64_t>(v));
    }
    return labels;
}

void cmd_plot(const PlotArgs& a, std::ostream& out) {
    const Embedding emb = load_embedding(a.embedding);
    const bool want_svg = !a.out.empty() || a.rgb_out.empty();
    if (want_svg && emb.cols() != 2) {
        if (emb.cols() == 3) {
            throw UsageError("3-D embeddings cannot be drawn as SVG; use --rgb-out for an RGB CSV");
        }
        throw UsageError("SVG plots need a 2-D embedding, got " + std::to_string(emb.cols()) + " columns");
    }
    if (!a.rgb_out.empty() && emb.cols() != 3) {
        throw UsageError("--rgb-out needs a 3-D embedding, got " + std::to_string(emb.cols()) + " columns");
    }
    if (!a.rgb_out.empty()) write_text_file(a.rgb_out, plot::rgb_csv(emb));
    if (!want_svg) return;

    std::vector<plot::Rgb> colors;
    plot::SvgOptions options;
    if (!a.labels.empty()) {
        const auto labels = load_labels(a.labels);
        if (labels.size() != emb.rows()) {
            throw InvalidInput("labels file has " + std::to_string(labels.size()) + " rows, embedding has " +
                               std::to_string(emb.rows()));
        }
        colors = plot::categorical_colors(labels);
    } else if (a.distance_from >= 0) {
        const DataMatrix data = load_input(a.input.path, a.input);
        const auto ref = static_cast<std::size_t>(a.distance_from);
        if (data.points.rows() != emb.rows()) {
            throw InvalidInput("input has " + std::to_string(data.points.rows()) + " rows, embedding has " +
                               std::to_string(emb.rows()));
        }
        if (ref >= emb.rows()) throw InvalidInput("--color-by-distance-from is out of range");
        std::vector<double> dist(emb.rows());
        for (std::size_t i = 0; i < emb.rows(); ++i) {
            double s = 0.0;
            for (std::size_t c = 0; c < data.points.cols(); ++c) {
                const double d = data.points(i, c) - data.points(ref, c);
                s += d * d;
            }
            dist[i] = std::sqrt(s);
        }
        colors = plot::distance_colors(dist);
        options.highlight = ref;
    }
    emit(a.out, plot::render_svg(emb, colors, options), out);
}

struct DatasetArgs {
    std::size_t n = 0;
    double noise = 0.0;
    std::size_t centers = 8;
    std::size_t dim = 30;
    double stddev = 1.0;
    double half_width = 10.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels_out;
};

void cmd_dataset(const std::string& kind, const DatasetArgs& a, std::ostream& out) {
    DataMatrix data;
    if (kind == "swissroll") {
        data = make_swiss_roll(a.n ? a.n : 2000, a.noise, RunSeed{a.seed});
    } else {
        const Matrix centers = random_centers(a.centers, a.dim, a.half_width, RunSeed{a.seed});
        data = make_blobs(a.n ? a.n : 1500, centers, a.stddev, RunSeed{a.seed});
    }
    emit(a.out, format_embedding_csv(data.points), out);
    if (!a.labels_out.empty() && data.labels) {
        std::string text;
        for (auto l : *data.labels) text += std::to_string(l) + "\n";
        write_text_file(a.labels_out, text);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"PCC dimensionality reduction", "pccdr"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    long threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: PCCDR_THREADS or 1)")
        ->check(CLI::PositiveNumber);

    std::function<void()> action;

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a PCC embedding");
    add_input_flags(fit_cmd, fit.input, true);
    add_fit_flags(fit_cmd, fit.fit);
    fit_cmd->add_option("--out", fit.out, "Embedding CSV (default: stdout)");
    fit_cmd->add_option("--report", fit.report, "Fit report JSON");
    fit_cmd->add_option("--seed", fit.seed, "Run seed");
    fit_cmd->add_flag("--no-timing", fit.no_timing, "Write wall_ms as 0 in the report");
    fit_cmd->callback([&] { action = [&] { cmd_fit(fit, out); }; });

    RefineArgs refine;
    auto* refine_cmd = app.add_subcommand("refine", "Refine an existing embedding");
    add_input_flags(refine_cmd, refine.input, true);
    refine_cmd->add_option("--init", refine.init, "Initial embedding CSV")->required();
    refine_cmd->add_option("--out", refine.out, "Embedding CSV (default: stdout)");
    refine_cmd->add_option("--report", refine.report, "Refinement report JSON");
    refine_cmd->add_option("--lambda", refine.config.lambda, "Anchor weight")->check(CLI::NonNegativeNumber);
    refine_cmd->add_option("--iters", refine.config.iters, "Epochs");
    refine_cmd->add_option("--inner-steps", refine.config.inner_steps, "Adam steps per epoch");
    refine_cmd->add_option("--k-refs", refine.config.k_refs, "Reference points per row")
        ->check(CLI::PositiveNumber);
    refine_cmd->add_option("--epsilon", refine.config.epsilon, "Soft-rank regularization")
        ->check(CLI::PositiveNumber);
    refine_cmd->add_option("--lr", refine.config.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
    refine_cmd->add_option("--seed", refine.seed, "Run seed");
    refine_cmd->add_flag("--no-timing", refine.no_timing, "Write wall_ms as 0 in the report");
    refine_cmd->callback([&] { action = [&] { cmd_refine(refine, out); }; });

    EvaluateArgs eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score an embedding against its data");
    add_input_flags(eval_cmd, eval.input, true);
    eval_cmd->add_option("--embedding", eval.embedding, "Embedding CSV")->required();
    eval_cmd->add_option("--metric-k", eval.k, "Neighbors for local metrics")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--max-pairs", eval.max_pairs, "Pair budget for global correlations")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", eval.seed, "Pair sampling seed");
    eval_cmd->add_option("--out", eval.out, "Report JSON (default: stdout)");
    eval_cmd->callback([&] { action = [&] { cmd_evaluate(eval, out); }; });

    BenchmarkArgs bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "Compare methods on one dataset");
    bench_cmd->add_option("--dataset", bench.dataset, "swissroll | blobs | file:<path>")->required();
    bench_cmd->add_option("--methods", bench.methods, "pcc,pca,random,external:<name>=<emb.csv>");
    bench_cmd->add_option("--seeds", bench.seeds, "Comma-separated run seeds");
    bench_cmd->add_option("--out", bench.out, "Results CSV (default: stdout)");
    bench_cmd->add_option("--summary", bench.summary, "Summary JSON (default: --out with .json)");
    bench_cmd->add_option("--n", bench.n, "Points for generated datasets");
    bench_cmd->add_option("--noise", bench.noise, "Swiss roll noise std")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--centers", bench.centers, "Blob centers")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--blob-dim", bench.blob_dim, "Blob dimension")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--blob-std", bench.blob_std, "Blob std")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--data-seed", bench.data_seed, "Dataset generator seed");
    bench_cmd->add_option("--metric-k", bench.metric_k, "Neighbors for local metrics")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--max-pairs", bench.max_pairs, "Pair budget for global correlations")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--format", bench.input.format, "csv | raw-f32 (file: datasets)")
        ->check(CLI::IsMember({"csv", "raw-f32"}));
    bench_cmd->add_flag("--header", bench.input.header, "CSV has a header line (file: datasets)");
    bench_cmd->add_option("--label-column", bench.input.label_column, "0-based label column (file: datasets)")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_flag("--standardize", bench.input.standardize, "Z-score each column before use");
    add_fit_flags(bench_cmd, bench.fit);
    bench_cmd->add_flag("--no-timing", bench.no_timing, "Write wall_ms as 0");
    bench_cmd->callback([&] { action = [&] { cmd_benchmark(bench, out); }; });

    PlotArgs plot_args;
    auto* plot_cmd = app.add_subcommand("plot", "Scatter plot of a 2-D embedding");
    plot_cmd->add_option("--embedding", plot_args.embedding, "Embedding CSV")->required();
    auto* labels_opt = plot_cmd->add_option("--labels", plot_args.labels, "Integer labels, one per line");
    auto* input_opt = add_input_flags(plot_cmd, plot_args.input, false);
    plot_cmd->add_option("--color-by-distance-from", plot_args.distance_from,
                         "Color by input-space distance from this row")
        ->check(CLI::NonNegativeNumber)
        ->needs(input_opt)
        ->excludes(labels_opt);
    plot_cmd->add_option("--out", plot_args.out, "SVG output (default: stdout)");
    plot_cmd->add_option("--rgb-out", plot_args.rgb_out, "Per-point RGB CSV for 3-D embeddings");
    plot_cmd->callback([&] { action = [&] { cmd_plot(plot_args, out); }; });

    DatasetArgs ds;
    std::string ds_kind;
    auto* ds_cmd = app.add_subcommand("dataset", "Generate a synthetic dataset");
    ds_cmd->add_option("kind", ds_kind, "swissroll | blobs")
        ->required()
        ->check(CLI::IsMember({"swissroll", "blobs"}));
    ds_cmd->add_option("--n", ds.n, "Points (default 2000 swissroll, 1500 blobs)");
    ds_cmd->add_option("--noise", ds.noise, "Swiss roll noise std")->check(CLI::NonNegativeNumber);
    ds_cmd->add_option("--centers", ds.centers, "Blob centers")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--dim", ds.dim, "Blob dimension")->check(CLI::PositiveNumber);
    ds_cmd->add_option("--std", ds.stddev, "Blob std")->check(CLI::NonNegativeNumber);
    ds_cmd->add_option("--half-width", ds.half_width, "Blob centers are uniform in [-w, w]")
        ->check(CLI::PositiveNumber);
    ds_cmd->add_option("--seed", ds.seed, "Generator seed");
    ds_cmd->add_option("--out", ds.out, "Feature CSV (default: stdout)");
    ds_cmd->add_option("--labels-out", ds.labels_out, "Labels, one integer per line");
    ds_cmd->callback([&] { action = [&] { cmd_dataset(ds_kind, ds, out); }; });

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (threads > 0) set_thread_count(static_cast<std::size_t>(threads));
        action();
    } catch (const UsageError& e) {
        err << "pccdr: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "pccdr: numerical error at iteration " << e.iteration() << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "pccdr: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "pccdr: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace pccdr::cli
