#include "lhcn/hypergraph.hpp"

#include <algorithm>
#include <unordered_map>

namespace lhcn {

LabelAssignment LabelAssignment::restricted_to(const std::vector<int>& nodes) const {
    LabelAssignment out;
    out.classes = classes;
    for (int v : nodes) {
        auto it = node_to_class.find(v);
        if (it != node_to_class.end()) out.node_to_class.emplace(v, it->second);
    }
    return out;
}

std::vector<std::vector<int>> Hypergraph::node_to_edges() const {
    std::vector<std::vector<int>> index(static_cast<std::size_t>(n));
    for (int p = 0; p < m(); ++p) {
        for (int v : hyperedges[static_cast<std::size_t>(p)]) {
            index[static_cast<std::size_t>(v)].push_back(p);
        }
    }
    return index;
}

namespace {

void validate_labels(const LabelAssignment& labels, int n) {
    for (const auto& [node, cls] : labels.node_to_class) {
        if (node < 0 || node >= n) {
            fail(ErrorKind::validation,
                 "label references unknown node index " + std::to_string(node));
        }
        if (cls < 0 || cls >= labels.num_classes()) {
            fail(ErrorKind::validation, "label of node " + std::to_string(node) +
                                            " has invalid class index " + std::to_string(cls));
        }
    }
}

}  // namespace

Hypergraph build_hypergraph_indexed(std::vector<std::string> node_ids,
                                    std::vector<std::vector<int>> hyperedges, Matrix features,
                                    LabelAssignment labels, BuildOptions options,
                                    BuildStats* stats) {
    const int n = static_cast<int>(node_ids.size());
    if (features.rows() != static_cast<std::size_t>(n)) {
        fail(ErrorKind::validation,
             "feature row count " + std::to_string(features.rows()) + " does not match node count " +
                 std::to_string(n));
    }
    if (!features.all_finite()) {
        fail(ErrorKind::validation, "feature matrix contains non-finite entries");
    }
    validate_labels(labels, n);

    Hypergraph h;
    h.n = n;
    h.node_ids = std::move(node_ids);
    h.features = std::move(features);
    h.labels = std::move(labels);
    h.hyperedges.reserve(hyperedges.size());

    std::unordered_map<std::string, int> seen;  // normalized edge -> first index
    int removed = 0;
    for (std::size_t j = 0; j < hyperedges.size(); ++j) {
        auto& edge = hyperedges[j];
        if (edge.empty()) {
            fail(ErrorKind::validation, "hyperedge " + std::to_string(j) + " is empty");
        }
        for (int v : edge) {
            if (v < 0 || v >= n) {
                fail(ErrorKind::validation, "hyperedge " + std::to_string(j) +
                                                " references unknown node index " +
                                                std::to_string(v));
            }
        }
        std::sort(edge.begin(), edge.end());
        edge.erase(std::unique(edge.begin(), edge.end()), edge.end());

        if (options.dedup_edges) {
            std::string key;
            key.reserve(edge.size() * 4);
            for (int v : edge) {
                key.append(reinterpret_cast<const char*>(&v), sizeof(v));
            }
            if (!seen.emplace(std::move(key), static_cast<int>(j)).second) {
                ++removed;
                continue;
            }
        }
        h.hyperedges.push_back(std::move(edge));
    }
    if (stats != nullptr) stats->dedup_removed = removed;
    return h;
}

Hypergraph build_hypergraph(std::vector<std::string> node_ids,
                            const std::vector<std::vector<std::string>>& hyperedges,
                            Matrix features, LabelAssignment labels, BuildOptions options,
                            BuildStats* stats) {
    std::unordered_map<std::string, int> index;
    index.reserve(node_ids.size());
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
        if (!index.emplace(node_ids[i], static_cast<int>(i)).second) {
            fail(ErrorKind::validation, "duplicate node id '" + node_ids[i] + "'");
        }
    }
    std::vector<std::vector<int>> indexed;
    indexed.reserve(hyperedges.size());
    for (const auto& edge : hyperedges) {
        std::vector<int> members;
        members.reserve(edge.size());
        for (const auto& id : edge) {
            auto it = index.find(id);
            if (it == index.end()) {
                fail(ErrorKind::validation, "hyperedge references unknown node id '" + id + "'");
            }
            members.push_back(it->second);
        }
        indexed.push_back(std::move(members));
    }
    return build_hypergraph_indexed(std::move(node_ids), std::move(indexed), std::move(features),
                                    std::move(labels), options, stats);
}

IncidenceMatrix incidence(const Hypergraph& h) {
    const auto node_edges = h.node_to_edges();
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(
        static_cast<std::size_t>(h.n));
    for (int v = 0; v < h.n; ++v) {
        auto& row = rows[static_cast<std::size_t>(v)];
        row.reserve(node_edges[static_cast<std::size_t>(v)].size());
        for (int p : node_edges[static_cast<std::size_t>(v)]) {
            row.emplace_back(static_cast<std::int32_t>(p), 1.0);
        }
    }
    return CsrMatrix::from_rows(static_cast<std::size_t>(h.n),
                                static_cast<std::size_t>(h.m()), rows);
}

}  // namespace lhcn
