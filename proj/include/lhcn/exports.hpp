#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lhcn/backmap.hpp"
#include "lhcn/citation.hpp"
#include "lhcn/gcn.hpp"
#include "lhcn/hypergraph.hpp"
#include "lhcn/line_graph.hpp"
#include "lhcn/manifest.hpp"

namespace lhcn {

// 17 significant digits, enough to round-trip any double exactly.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Weighted edge list, one "p q w" line per undirected edge with p < q.
void write_edge_list(const std::filesystem::path& path, const CsrMatrix& adjacency);

// TSV, row per line node: index then feature values.
void write_line_features(const std::filesystem::path& path, const Matrix& features);

// TSV "line_node class_or_NA".
void write_line_labels(const std::filesystem::path& path, const std::vector<int>& labels,
                       const std::vector<std::string>& classes);

// CSV "epoch,loss,lr" with a 0-based epoch column.
void write_run_report_csv(const std::filesystem::path& path, const RunReport& report);

// TSV "node_id predicted_class true_class_or_NA split".
void write_predictions(const std::filesystem::path& path, const Hypergraph& h,
                       const std::vector<int>& node_preds, const Split& split);

// TSV with header "node_id dim_0 ... dim_{k-1}".
void write_embeddings(const std::filesystem::path& path, const Hypergraph& h,
                      const Matrix& node_embeddings);

// Versioned text container: shapes and row-major entries of every parameter
// matrix, the label alphabet, and the full manifest of the producing run.
void save_checkpoint(const std::filesystem::path& path, const GcnModel& model,
                     const std::vector<std::string>& classes, const RunManifest& manifest);

struct Checkpoint {
    GcnModel model;
    std::vector<std::string> classes;
    RunManifest manifest;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace lhcn
