// Command-line driver: transform | train | eval | bench | export-embeddings.
// Exit codes: 0 success, 2 parse error, 3 validation error, 4 numeric error,
// 5 I/O error, 1 anything unexpected.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lhcn/pipeline.hpp"

namespace {

struct CliOverrides {
    std::string manifest_path;
    std::vector<std::pair<std::string, std::string>> pairs;
};

// Every dataset/run option funnels through RunManifest::apply so that CLI
// flags and manifest files cannot drift apart.
void add_manifest_options(CLI::App* cmd, CliOverrides& overrides) {
    cmd->add_option("--manifest", overrides.manifest_path, "manifest file with key = value lines");
    const auto add = [cmd, &overrides](const std::string& flag, const std::string& key,
                                       const std::string& help) {
        cmd->add_option_function<std::string>(
               flag,
               [&overrides, key](const std::string& value) {
                   overrides.pairs.emplace_back(key, value);
               },
               help)
            ->type_name("VALUE");
    };
    add("--content", "content", ".content file: <id> <features...> <label> per line");
    add("--cites", "cites", ".cites file: <cited> <citing> per line");
    add("--incidence", "incidence", "incidence-list file: <edge_id>: <node> ... per line");
    add("--cites-order", "cites_order", "cited_first (default) or citing_first");
    add("--dedup", "dedup", "drop exact-duplicate hyperedges (default true)");
    add("--singleton-completion", "singleton_completion",
        "add {v} for nodes in no hyperedge (default true)");
    add("--train-fraction", "train_fraction", "labelled fraction used for training (default 0.8)");
    add("--split-seed", "split_seed", "seed of the train/test shuffle");
    add("--init-seed", "init_seed", "seed of the parameter initialization");
    add("--hidden1", "hidden1", "first hidden width (default 32)");
    add("--hidden2", "hidden2", "second hidden width / embedding size (default 16)");
    add("--epochs", "epochs", "training epochs (default 200)");
    add("--base-lr", "base_lr", "initial Adam learning rate (default 0.01)");
    add("--lr-halving-period", "lr_halving_period", "epochs between halvings (default 100)");
    add("--leaky-slope", "leaky_slope", "negative slope of the activation (default 0.01)");
    add("--use-head", "use_head", "train a linear classifier head (default true)");
    add("--loss-mode", "loss_mode", "sum (default) or mean over labelled line nodes");
    add("--dropout", "dropout", "input-feature dropout rate (default 0)");
    add("--weight-decay", "weight_decay", "L2 coefficient (default 0)");
    add("--float32", "float32", "train in single precision (default false)");
    add("--seeds", "seeds", "number of consecutive seeded runs (default 1)");
    add("--out", "out_dir", "output directory (default runs)");
}

lhcn::RunManifest resolve_manifest(const CliOverrides& overrides) {
    lhcn::RunManifest manifest;
    if (!overrides.manifest_path.empty()) {
        manifest = lhcn::RunManifest::from_file(overrides.manifest_path);
    }
    for (const auto& [key, value] : overrides.pairs) manifest.apply(key, value);
    return manifest;
}

int run_train(const CliOverrides& overrides) {
    const lhcn::RunManifest manifest = resolve_manifest(overrides);
    const lhcn::SeedSummary summary = lhcn::cmd_train(manifest);
    for (std::size_t i = 0; i < summary.test_accuracies.size(); ++i) {
        std::printf("run %zu: test_accuracy=%.4f (%s)\n", i, summary.test_accuracies[i],
                    summary.run_dirs[i].string().c_str());
    }
    std::printf("mean=%.4f stddev=%.4f over %zu run(s)\n", summary.mean, summary.stddev,
                summary.test_accuracies.size());
    if (summary.log_clamp_count > 0) {
        std::fprintf(stderr, "warning: %ld predicted probabilities hit the 1e-12 log floor\n",
                     summary.log_clamp_count);
    }
    if (summary.unpredicted_test > 0) {
        std::fprintf(stderr,
                     "warning: %d test nodes had no incident hyperedge and were scored as "
                     "errors (singleton completion disabled?)\n",
                     summary.unpredicted_test);
    }
    return 0;
}

int run_transform(const CliOverrides& overrides) {
    const lhcn::RunManifest manifest = resolve_manifest(overrides);
    lhcn::cmd_transform(manifest);
    std::printf("line graph written to %s\n", manifest.out_dir.string().c_str());
    std::fputs(lhcn::read_text_file(manifest.out_dir / "ingest_report.txt").c_str(), stdout);
    return 0;
}

int run_eval(const std::string& run_dir) {
    const lhcn::EvalResult result = lhcn::eval_run_dir(run_dir);
    std::fputs(result.metrics.to_text(result.h.labels.classes).c_str(), stdout);
    return 0;
}

int run_export(const std::string& run_dir, const std::string& out_path) {
    const lhcn::EvalResult result = lhcn::eval_run_dir(run_dir);
    lhcn::write_embeddings(out_path, result.h, result.node_embeddings);
    std::printf("embeddings written to %s\n", out_path.c_str());
    return 0;
}

int run_bench(const CliOverrides& overrides, int base_edges, double node_ratio, int max_degree,
              int reps, std::uint64_t seed) {
    // With a dataset configured, time the real pipeline stage by stage.
    bool has_dataset = !overrides.manifest_path.empty();
    for (const auto& [key, value] : overrides.pairs) {
        (void)value;
        has_dataset = has_dataset || key == "content" || key == "incidence";
    }
    if (has_dataset) {
        const lhcn::RunManifest manifest = resolve_manifest(overrides);
        manifest.validate();
        const lhcn::LoadedDataset data = lhcn::load_dataset(manifest);
        lhcn::RunResult result = lhcn::run_single(data.h, manifest, 0);
        std::printf("ingest_seconds    %.3f\n", data.seconds);
        std::printf("transform_seconds %.3f\n", result.report.transform_seconds);
        std::printf("train_seconds     %.3f\n", result.report.train_seconds);
        std::printf("backmap_seconds   %.3f\n", result.report.backmap_seconds);
        std::printf("total_seconds     %.3f\n", result.report.total_seconds + data.seconds);
        return 0;
    }
    const lhcn::BenchResult result =
        lhcn::bench_scaling(base_edges, node_ratio, max_degree, reps, seed);
    std::printf("m=%d transform_seconds=%.4f\n", result.small.num_edges,
                result.small.transform_seconds);
    std::printf("m=%d transform_seconds=%.4f\n", result.large.num_edges,
                result.large.transform_seconds);
    std::printf("doubling_ratio=%.3f (linear scaling is ~2)\n", result.ratio);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypergraph node classification via a weighted line graph and graph convolution"};
    app.require_subcommand(1);

    CliOverrides train_overrides;
    CLI::App* train_cmd = app.add_subcommand(
        "train", "run the full pipeline and write run directories with metrics");
    add_manifest_options(train_cmd, train_overrides);

    CliOverrides transform_overrides;
    CLI::App* transform_cmd =
        app.add_subcommand("transform", "write the weighted line graph and the ingest report");
    add_manifest_options(transform_cmd, transform_overrides);

    std::string eval_dir;
    CLI::App* eval_cmd = app.add_subcommand("eval", "recompute metrics from a run directory");
    eval_cmd->add_option("--run", eval_dir, "run directory with checkpoint.txt")->required();

    std::string export_dir, export_out = "embeddings.tsv";
    CLI::App* export_cmd =
        app.add_subcommand("export-embeddings", "write hypernode embeddings from a run directory");
    export_cmd->add_option("--run", export_dir, "run directory with checkpoint.txt")->required();
    export_cmd->add_option("--out", export_out, "output TSV path");

    CliOverrides bench_overrides;
    int bench_edges = 50000, bench_degree = 4, bench_reps = 5;
    double bench_ratio = 2.0;
    std::uint64_t bench_seed = 1;
    CLI::App* bench_cmd = app.add_subcommand(
        "bench", "time the transform on doubling synthetic hypergraphs, or a dataset end to end");
    add_manifest_options(bench_cmd, bench_overrides);
    bench_cmd->add_option("--m0", bench_edges, "hyperedge count of the small instance");
    bench_cmd->add_option("--node-ratio", bench_ratio, "nodes per hyperedge ratio");
    bench_cmd->add_option("--max-degree", bench_degree, "max hyperedges per node");
    bench_cmd->add_option("--reps", bench_reps, "repetitions, best time wins");
    bench_cmd->add_option("--bench-seed", bench_seed, "synthetic structure seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed()) return run_train(train_overrides);
        if (transform_cmd->parsed()) return run_transform(transform_overrides);
        if (eval_cmd->parsed()) return run_eval(eval_dir);
        if (export_cmd->parsed()) return run_export(export_dir, export_out);
        if (bench_cmd->parsed()) {
            return run_bench(bench_overrides, bench_edges, bench_ratio, bench_degree, bench_reps,
                             bench_seed);
        }
    } catch (const lhcn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
