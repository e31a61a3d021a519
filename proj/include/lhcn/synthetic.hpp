#pragma once

#include <cstdint>
#include <filesystem>

#include "lhcn/citation.hpp"
#include "lhcn/hypergraph.hpp"

namespace lhcn {

// Structure-heavy random hypergraph for scaling benchmarks: every node joins
// between 1 and max_degree hyperedges, so the per-node incident-edge count
// stays bounded while m grows.
struct RandomHypergraphParams {
    int num_edges = 1000;
    double node_ratio = 2.0;  // n = round(node_ratio * num_edges)
    int max_degree = 4;
    int feature_dim = 16;
    std::uint64_t seed = 1;
};

Hypergraph random_hypergraph(const RandomHypergraphParams& params);

// Class-structured citation dataset: features carry a per-class block of
// frequently-active dimensions, citations mostly stay within a class. Used
// by tests and as an offline stand-in for real citation data.
struct PlantedParams {
    int nodes = 240;
    int classes = 3;
    int dims_per_class = 8;   // feature_dim = classes * dims_per_class
    double p_active_in = 0.5; // active probability inside the class block
    double p_active_out = 0.02;
    int min_out_citations = 1;
    int max_out_citations = 3;
    double same_class_bias = 0.9;
    std::uint64_t seed = 7;
};

struct CitationDataset {
    std::vector<CitationRecord> records;
    std::vector<CitationPair> pairs;
};

CitationDataset planted_citation_dataset(const PlantedParams& params);

// Writes the dataset in .content / .cites format (cited id first).
void write_citation_files(const CitationDataset& dataset,
                          const std::filesystem::path& content_path,
                          const std::filesystem::path& cites_path);

}  // namespace lhcn
