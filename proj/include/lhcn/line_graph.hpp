#pragma once

#include <vector>

#include "lhcn/hypergraph.hpp"
#include "lhcn/matrix.hpp"

namespace lhcn {

// Weighted, attributed, partially labelled line graph of a hypergraph.
// Node p corresponds to hyperedge p. Two line nodes are adjacent iff their
// hyperedges share at least one hypernode; the edge weight is the overlap
// ratio |intersection| / |union|, which lies in (0, 1].
struct LineGraph {
    int m = 0;
    CsrMatrix adjacency;     // m x m, symmetric, zero diagonal
    Matrix features;         // m x d, row p = mean feature of hyperedge p
    std::vector<int> labels; // class index per line node, -1 = unlabelled
};

// Builds the adjacency via the node -> incident-hyperedges index: every
// hypernode contributes intersection counts for the pairs of hyperedges it
// belongs to, so the cost is O(m + sum_v s_v^2) with s_v the number of
// hyperedges containing v -- no all-pairs scan.
LineGraph build_line_graph(const Hypergraph& h);

// Row p = mean of the hypernode feature rows over hyperedge p.
Matrix derive_line_attributes(const Hypergraph& h, const Matrix& features);

// Line node p is labelled iff hyperedge p contains at least one node of
// train_labels; the label is the majority class among those members, ties
// broken towards the smaller class index. Callers must pass labels already
// restricted to the training nodes; this function cannot detect leakage.
std::vector<int> transfer_labels(const Hypergraph& h, const LabelAssignment& train_labels);

// Self-loops with weight 1, then symmetric degree normalization:
// with A' = A + I and D_pp = sum_q A'_pq, returns D^{-1/2} A' D^{-1/2}.
CsrMatrix normalize_adjacency(const CsrMatrix& a);

}  // namespace lhcn
