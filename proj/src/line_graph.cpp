#include "lhcn/line_graph.hpp"

#include <algorithm>
#include <cmath>

namespace lhcn {

LineGraph build_line_graph(const Hypergraph& h) {
    const int m = h.m();
    const auto node_edges = h.node_to_edges();

    LineGraph lg;
    lg.m = m;

    // For each row p, count shared nodes with every later hyperedge q > p by
    // walking the incident-edge lists of p's members. A scratch counter per
    // q plus a touched list keeps each pair's count exact even when the pair
    // is visited once per shared node.
    std::vector<int> overlap(static_cast<std::size_t>(m), 0);
    std::vector<int> touched;
    std::vector<std::vector<std::pair<std::int32_t, double>>> adj(static_cast<std::size_t>(m));

    for (int p = 0; p < m; ++p) {
        touched.clear();
        const auto& edge_p = h.hyperedges[static_cast<std::size_t>(p)];
        for (int v : edge_p) {
            for (int q : node_edges[static_cast<std::size_t>(v)]) {
                if (q <= p) continue;
                if (overlap[static_cast<std::size_t>(q)] == 0) touched.push_back(q);
                ++overlap[static_cast<std::size_t>(q)];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int q : touched) {
            const int inter = overlap[static_cast<std::size_t>(q)];
            overlap[static_cast<std::size_t>(q)] = 0;
            const auto size_q = h.hyperedges[static_cast<std::size_t>(q)].size();
            const int uni = static_cast<int>(edge_p.size() + size_q) - inter;
            const double w = static_cast<double>(inter) / static_cast<double>(uni);
            adj[static_cast<std::size_t>(p)].emplace_back(q, w);
            adj[static_cast<std::size_t>(q)].emplace_back(p, w);
        }
    }
    // Upper-triangle entries were appended in ascending q; mirrored entries
    // need a per-row sort.
    for (auto& row : adj) {
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    lg.adjacency = CsrMatrix::from_rows(static_cast<std::size_t>(m),
                                        static_cast<std::size_t>(m), adj);
    return lg;
}

Matrix derive_line_attributes(const Hypergraph& h, const Matrix& features) {
    if (features.rows() != static_cast<std::size_t>(h.n)) {
        fail(ErrorKind::validation, "feature row count does not match node count");
    }
    const std::size_t d = features.cols();
    Matrix out(static_cast<std::size_t>(h.m()), d);
    for (int p = 0; p < h.m(); ++p) {
        const auto& edge = h.hyperedges[static_cast<std::size_t>(p)];
        double* row = out.row(static_cast<std::size_t>(p));
        for (int v : edge) {
            const double* src = features.row(static_cast<std::size_t>(v));
            for (std::size_t j = 0; j < d; ++j) row[j] += src[j];
        }
        const double inv = 1.0 / static_cast<double>(edge.size());
        for (std::size_t j = 0; j < d; ++j) row[j] *= inv;
    }
    return out;
}

std::vector<int> transfer_labels(const Hypergraph& h, const LabelAssignment& train_labels) {
    std::vector<int> line_labels(static_cast<std::size_t>(h.m()), -1);
    std::vector<int> votes(static_cast<std::size_t>(train_labels.num_classes()));
    for (int p = 0; p < h.m(); ++p) {
        std::fill(votes.begin(), votes.end(), 0);
        bool any = false;
        for (int v : h.hyperedges[static_cast<std::size_t>(p)]) {
            const int cls = train_labels.class_of(v);
            if (cls >= 0) {
                ++votes[static_cast<std::size_t>(cls)];
                any = true;
            }
        }
        if (!any) continue;
        // Majority; ties resolve to the smaller class index.
        int best = 0;
        for (int c = 1; c < train_labels.num_classes(); ++c) {
            if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) {
                best = c;
            }
        }
        line_labels[static_cast<std::size_t>(p)] = best;
    }
    return line_labels;
}

CsrMatrix normalize_adjacency(const CsrMatrix& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::validation, "adjacency must be square");
    const std::size_t m = a.rows();

    // Degrees of A + I; the self-loop guarantees every degree >= 1.
    std::vector<double> degree(m);
    for (std::size_t p = 0; p < m; ++p) degree[p] = 1.0 + a.row_sum(p);
    std::vector<double> inv_sqrt(m);
    for (std::size_t p = 0; p < m; ++p) inv_sqrt[p] = 1.0 / std::sqrt(degree[p]);

    const auto& indptr = a.indptr();
    const auto& indices = a.indices();
    const auto& values = a.values();

    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(m);
    for (std::size_t p = 0; p < m; ++p) {
        auto& row = rows[p];
        row.reserve(indptr[p + 1] - indptr[p] + 1);
        bool placed_diag = false;
        for (std::size_t k = indptr[p]; k < indptr[p + 1]; ++k) {
            const auto q = static_cast<std::size_t>(indices[k]);
            if (!placed_diag && q > p) {
                row.emplace_back(static_cast<std::int32_t>(p), inv_sqrt[p] * inv_sqrt[p]);
                placed_diag = true;
            }
            // values[k] * (a * b): the grouping keeps (p,q) and (q,p)
            // bit-identical because IEEE multiplication is commutative.
            row.emplace_back(indices[k], values[k] * (inv_sqrt[p] * inv_sqrt[q]));
        }
        if (!placed_diag) {
            row.emplace_back(static_cast<std::int32_t>(p), inv_sqrt[p] * inv_sqrt[p]);
        }
    }
    return CsrMatrix::from_rows(m, m, rows);
}

}  // namespace lhcn
