#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lhcn/hypergraph.hpp"

namespace lhcn {

struct CitationRecord {
    std::string paper_id;
    std::vector<double> features;
    std::string class_label;
};

struct CitationPair {
    std::string cited_id;
    std::string citing_id;
};

// Column order of a .cites file. The datasets' native convention lists the
// cited paper first; a flag swaps it for files written the other way round.
enum class CitesOrder { cited_first, citing_first };

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 1;
};

// .content file: one record per line, whitespace-separated:
//   <id> <f_1> ... <f_d> <label>
// d is fixed by the first line. Binary and real-valued features both parse
// as decimals. Ragged lines and duplicate ids are parse errors.
std::vector<CitationRecord> parse_content(const std::filesystem::path& path);

// .cites file: two ids per line, column order per `order`. Pairs are
// returned in file order; blank lines are ignored.
std::vector<CitationPair> parse_cites(const std::filesystem::path& path,
                                      CitesOrder order = CitesOrder::cited_first);

// Generic incidence-list file: one hyperedge per line,
//   <edge_id>: <node_id> <node_id> ...
std::vector<std::vector<std::string>> parse_incidence_list(const std::filesystem::path& path);

struct IngestOptions {
    bool dedup_edges = true;
    // Every node that ends up in zero hyperedges receives a singleton edge
    // {v}; back-mapping is undefined otherwise and such nodes could never be
    // predicted. Disabling it makes them score as errors.
    bool singleton_completion = true;
};

struct IngestReport {
    int nodes = 0;
    int hyperedges = 0;
    int features = 0;
    int classes = 0;
    int citing_papers = 0;
    int dedup_removed = 0;
    int dropped_pairs = 0;
    int singleton_completions = 0;

    std::string to_text() const;  // "key = value" lines
};

// Builds the citation hypergraph: one hyperedge {a} + {papers a cites} per
// paper a with at least one outgoing citation, then singleton completion.
// Pairs naming ids absent from `records` are dropped and counted.
Hypergraph build_citation_hypergraph(const std::vector<CitationRecord>& records,
                                     const std::vector<CitationPair>& pairs,
                                     IngestOptions options = {}, IngestReport* report = nullptr);

// Generic alternative: hyperedges straight from an incidence list; features
// and labels still come from records.
Hypergraph build_incidence_hypergraph(const std::vector<CitationRecord>& records,
                                      const std::vector<std::vector<std::string>>& edges,
                                      IngestOptions options = {}, IngestReport* report = nullptr);

struct Split {
    std::vector<int> train;  // sorted ascending
    std::vector<int> test;   // sorted ascending
};

// Seeded shuffle (SplitMix64 + Fisher-Yates, see rng.hpp) of the labelled
// nodes; |train| = round(fraction * count). Identical output for identical
// inputs on every platform.
Split train_test_split(const LabelAssignment& labels, const SplitSpec& spec);

}  // namespace lhcn
