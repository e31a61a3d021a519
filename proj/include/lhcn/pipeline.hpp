#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lhcn/backmap.hpp"
#include "lhcn/exports.hpp"
#include "lhcn/manifest.hpp"
#include "lhcn/synthetic.hpp"

namespace lhcn {

struct LoadedDataset {
    Hypergraph h;
    IngestReport report;
    double seconds = 0.0;
};

// Reads the dataset named by the manifest (citation or incidence-list mode).
LoadedDataset load_dataset(const RunManifest& manifest);

// One seeded run, all stages in memory. seed_offset shifts both the split
// seed and the init seed, which is how --seeds N derives run seeds.
struct RunResult {
    Split split;
    LineGraph lg;
    GcnModel model;
    RunReport report;
    Metrics metrics;
    std::vector<int> line_preds;
    std::vector<int> node_preds;
    Matrix node_embeddings;  // n x hidden2
};

RunResult run_single(const Hypergraph& h, const RunManifest& manifest,
                     std::uint64_t seed_offset = 0);

// `train` verb: runs manifest.seeds consecutive runs, writes one run
// directory each (manifest copy, checkpoint, report CSV, metrics,
// prediction and embedding TSVs) plus an aggregate summary. Partial run
// directories are removed on failure.
struct SeedSummary {
    std::vector<double> test_accuracies;
    std::vector<std::filesystem::path> run_dirs;
    double mean = 0.0;
    double stddev = 0.0;         // sample standard deviation; 0 for a single run
    long log_clamp_count = 0;    // summed over runs; nonzero deserves a warning
    int unpredicted_test = 0;    // test nodes without any incident hyperedge
};

SeedSummary cmd_train(const RunManifest& manifest);

// `transform` verb: writes line-graph edge list, line features, line labels
// and the ingest report. Labels are transferred from the manifest's train
// split, mirroring what training would see.
void cmd_transform(const RunManifest& manifest);

// `eval` / `export-embeddings` support: rebuild everything a run directory
// needs from its manifest copy and checkpoint.
struct EvalResult {
    Metrics metrics;
    Matrix node_embeddings;
    Hypergraph h;
};

EvalResult eval_run_dir(const std::filesystem::path& run_dir);

// `bench` verb, scaling half: times the transform stage on random
// hypergraphs at m and 2m with the same node/edge ratio and degree bound.
struct BenchPoint {
    int num_edges = 0;
    double transform_seconds = 0.0;
};

struct BenchResult {
    BenchPoint small;
    BenchPoint large;
    double ratio = 0.0;  // large.time / small.time; ~2 for linear scaling
};

BenchResult bench_scaling(int base_edges, double node_ratio, int max_degree, int reps,
                          std::uint64_t seed);

}  // namespace lhcn
