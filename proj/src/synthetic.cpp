#include "lhcn/synthetic.hpp"

#include <algorithm>
#include <fstream>

#include "lhcn/error.hpp"
#include "lhcn/rng.hpp"

namespace lhcn {

Hypergraph random_hypergraph(const RandomHypergraphParams& params) {
    if (params.num_edges < 1) fail(ErrorKind::validation, "num_edges must be >= 1");
    if (params.max_degree < 1) fail(ErrorKind::validation, "max_degree must be >= 1");
    const int m = params.num_edges;
    const int n = std::max(1, static_cast<int>(std::llround(params.node_ratio * m)));

    SplitMix64 rng(params.seed);
    std::vector<std::vector<int>> edges(static_cast<std::size_t>(m));
    for (int v = 0; v < n; ++v) {
        const int degree = 1 + static_cast<int>(rng.below(
                                   static_cast<std::uint64_t>(params.max_degree)));
        for (int k = 0; k < degree; ++k) {
            edges[rng.below(static_cast<std::uint64_t>(m))].push_back(v);
        }
    }
    // A hyperedge that attracted no nodes gets one so the structure stays valid.
    for (int j = 0; j < m; ++j) {
        if (edges[static_cast<std::size_t>(j)].empty()) {
            edges[static_cast<std::size_t>(j)].push_back(j % n);
        }
    }

    std::vector<std::string> node_ids;
    node_ids.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) node_ids.push_back("n" + std::to_string(v));

    Matrix features(static_cast<std::size_t>(n), static_cast<std::size_t>(params.feature_dim));
    for (double& f : features.data()) f = rng.next_double() < 0.1 ? 1.0 : 0.0;

    return build_hypergraph_indexed(std::move(node_ids), std::move(edges), std::move(features),
                                    LabelAssignment{}, BuildOptions{/*dedup_edges=*/false});
}

CitationDataset planted_citation_dataset(const PlantedParams& params) {
    if (params.nodes < params.classes * 2) {
        fail(ErrorKind::validation, "need at least two nodes per class");
    }
    SplitMix64 rng(params.seed);
    const int dim = params.classes * params.dims_per_class;

    CitationDataset data;
    data.records.reserve(static_cast<std::size_t>(params.nodes));
    std::vector<std::vector<int>> members(static_cast<std::size_t>(params.classes));
    for (int v = 0; v < params.nodes; ++v) {
        const int cls = v % params.classes;  // balanced classes
        members[static_cast<std::size_t>(cls)].push_back(v);
        CitationRecord rec;
        rec.paper_id = "p" + std::to_string(v);
        rec.class_label = "c" + std::to_string(cls);
        rec.features.resize(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            const bool in_block = j / params.dims_per_class == cls;
            const double p = in_block ? params.p_active_in : params.p_active_out;
            rec.features[static_cast<std::size_t>(j)] = rng.next_double() < p ? 1.0 : 0.0;
        }
        data.records.push_back(std::move(rec));
    }

    const int span = params.max_out_citations - params.min_out_citations + 1;
    for (int v = 0; v < params.nodes; ++v) {
        const int cls = v % params.classes;
        const int out_degree =
            params.min_out_citations + static_cast<int>(rng.below((std::uint64_t)span));
        for (int k = 0; k < out_degree; ++k) {
            int target = v;
            while (target == v) {
                if (rng.next_double() < params.same_class_bias) {
                    const auto& pool = members[static_cast<std::size_t>(cls)];
                    target = pool[rng.below(pool.size())];
                } else {
                    target = static_cast<int>(rng.below((std::uint64_t)params.nodes));
                }
            }
            data.pairs.push_back({"p" + std::to_string(target), "p" + std::to_string(v)});
        }
    }
    return data;
}

void write_citation_files(const CitationDataset& dataset,
                          const std::filesystem::path& content_path,
                          const std::filesystem::path& cites_path) {
    std::ofstream content(content_path);
    if (!content) fail(ErrorKind::io, "cannot write '" + content_path.string() + "'");
    for (const auto& rec : dataset.records) {
        content << rec.paper_id;
        for (double f : rec.features) content << '\t' << (f == 0.0 ? "0" : "1");
        content << '\t' << rec.class_label << '\n';
    }
    std::ofstream cites(cites_path);
    if (!cites) fail(ErrorKind::io, "cannot write '" + cites_path.string() + "'");
    for (const auto& pair : dataset.pairs) {
        cites << pair.cited_id << '\t' << pair.citing_id << '\n';
    }
}

}  // namespace lhcn
