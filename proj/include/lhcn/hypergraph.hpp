#pragma once

#include <map>
#include <string>
#include <vector>

#include "lhcn/matrix.hpp"

namespace lhcn {

// Partial node -> class map over a fixed label alphabet. Class indices are
// positions in `classes`; a node absent from the map is unlabelled.
struct LabelAssignment {
    std::vector<std::string> classes;
    std::map<int, int> node_to_class;  // ordered map: deterministic iteration

    int num_classes() const { return static_cast<int>(classes.size()); }
    bool has(int node) const { return node_to_class.count(node) != 0; }
    int class_of(int node) const {
        auto it = node_to_class.find(node);
        return it == node_to_class.end() ? -1 : it->second;
    }

    // Same alphabet, map restricted to the given nodes.
    LabelAssignment restricted_to(const std::vector<int>& nodes) const;
};

// Attributed, partially labelled hypergraph. Immutable after construction.
// Hyperedges are sorted, duplicate-free index arrays, and their order is
// stable: line-graph node p corresponds to hyperedges[p] forever after.
struct Hypergraph {
    int n = 0;
    std::vector<std::vector<int>> hyperedges;
    std::vector<std::string> node_ids;
    Matrix features;  // n x d
    LabelAssignment labels;

    int m() const { return static_cast<int>(hyperedges.size()); }
    int dim() const { return static_cast<int>(features.cols()); }

    // Inverted index: node -> incident hyperedge indices, ascending.
    std::vector<std::vector<int>> node_to_edges() const;
};

struct BuildOptions {
    // Exact-duplicate node sets collapse to the first occurrence. Duplicates
    // would create zero-information line-graph twins and distort majority
    // votes; disable for count-matching experiments.
    bool dedup_edges = true;
};

struct BuildStats {
    int dedup_removed = 0;
};

// Builds a validated hypergraph from string node ids. Node index = position
// in node_ids; hyperedge index = input order (after dedup).
Hypergraph build_hypergraph(std::vector<std::string> node_ids,
                            const std::vector<std::vector<std::string>>& hyperedges,
                            Matrix features, LabelAssignment labels,
                            BuildOptions options = {}, BuildStats* stats = nullptr);

// Same, with hyperedges already given as node-index lists.
Hypergraph build_hypergraph_indexed(std::vector<std::string> node_ids,
                                    std::vector<std::vector<int>> hyperedges,
                                    Matrix features, LabelAssignment labels,
                                    BuildOptions options = {}, BuildStats* stats = nullptr);

// n x m binary incidence matrix: entry (i, j) = 1 iff node i is in hyperedge j.
using IncidenceMatrix = CsrMatrix;
IncidenceMatrix incidence(const Hypergraph& h);

}  // namespace lhcn
