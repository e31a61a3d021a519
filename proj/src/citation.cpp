#include "lhcn/citation.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lhcn/rng.hpp"

namespace lhcn {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
    return in;
}

std::vector<std::string> split_whitespace(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

double parse_feature(const std::string& token, const std::filesystem::path& path, long line_no) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                   ": feature token '" + token + "' is not a number");
    }
    return v;
}

}  // namespace

std::vector<CitationRecord> parse_content(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<CitationRecord> records;
    std::unordered_set<std::string> ids;
    std::string line;
    long line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_whitespace(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 3) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": expected <id> <features...> <label>");
        }
        if (records.empty()) {
            dim = tokens.size() - 2;
        } else if (tokens.size() != dim + 2) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": ragged line, expected " + std::to_string(dim + 2) +
                                       " tokens, got " + std::to_string(tokens.size()));
        }
        CitationRecord rec;
        rec.paper_id = tokens.front();
        if (!ids.insert(rec.paper_id).second) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": duplicate paper id '" + rec.paper_id + "'");
        }
        rec.features.reserve(dim);
        for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
            rec.features.push_back(parse_feature(tokens[i], path, line_no));
        }
        rec.class_label = tokens.back();
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<CitationPair> parse_cites(const std::filesystem::path& path, CitesOrder order) {
    std::ifstream in = open_input(path);
    std::vector<CitationPair> pairs;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_whitespace(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 2) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": expected exactly two ids, got " +
                                       std::to_string(tokens.size()));
        }
        CitationPair pair;
        if (order == CitesOrder::cited_first) {
            pair.cited_id = tokens[0];
            pair.citing_id = tokens[1];
        } else {
            pair.cited_id = tokens[1];
            pair.citing_id = tokens[0];
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<std::vector<std::string>> parse_incidence_list(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<std::string>> edges;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (split_whitespace(line).empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": expected '<edge_id>: <node_id> ...'");
        }
        auto members = split_whitespace(line.substr(colon + 1));
        if (members.empty()) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": hyperedge lists no nodes");
        }
        edges.push_back(std::move(members));
    }
    return edges;
}

std::string IngestReport::to_text() const {
    std::ostringstream out;
    out << "nodes = " << nodes << "\n"
        << "hyperedges = " << hyperedges << "\n"
        << "features = " << features << "\n"
        << "classes = " << classes << "\n"
        << "citing_papers = " << citing_papers << "\n"
        << "dedup_removed = " << dedup_removed << "\n"
        << "dropped_pairs = " << dropped_pairs << "\n"
        << "singleton_completions = " << singleton_completions << "\n";
    return out.str();
}

namespace {

// Features, ids
struct RecordTables {
    std::vector<std::string> node_ids;
    std::unordered_map<std::string, int> id_to_index;
    Matrix features;
    LabelAssignment labels;
};

RecordTables index_records(const std::vector<CitationRecord>& records) {
    if (records.empty()) fail(ErrorKind::validation, "no records to build a hypergraph from");
    RecordTables t;
    const std::size_t dim = records.front().features.size();
    t.features = Matrix(records.size(), dim);
    t.node_ids.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (!t.id_to_index.emplace(rec.paper_id, static_cast<int>(i)).second) {
            fail(ErrorKind::validation, "duplicate paper id '" + rec.paper_id + "'");
        }
        t.node_ids.push_back(rec.paper_id);
        for (std::size_t j = 0; j < dim; ++j) t.features(i, j) = rec.features[j];
    }
    // Label alphabet: sorted unique class strings, so class indices do not
    // depend on record order.
    std::vector<std::string> classes;
    for (const auto& rec : records) classes.push_back(rec.class_label);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::unordered_map<std::string, int> class_index;
    for (std::size_t c = 0; c < classes.size(); ++c) class_index.emplace(classes[c], (int)c);
    t.labels.classes = std::move(classes);
    for (std::size_t i = 0; i < records.size(); ++i) {
        t.labels.node_to_class.emplace(static_cast<int>(i),
                                       class_index.at(records[i].class_label));
    }
    return t;
}

Hypergraph finish_build(RecordTables tables, std::vector<std::vector<int>> edges,
                        IngestOptions options, IngestReport* report) {
    BuildStats stats;
    Hypergraph h = build_hypergraph_indexed(std::move(tables.node_ids), std::move(edges),
                                            std::move(tables.features), std::move(tables.labels),
                                            BuildOptions{options.dedup_edges}, &stats);
    int completions = 0;
    if (options.singleton_completion) {
        std::vector<bool> covered(static_cast<std::size_t>(h.n), false);
        for (const auto& edge : h.hyperedges) {
            for (int v : edge) covered[static_cast<std::size_t>(v)] = true;
        }
        for (int v = 0; v < h.n; ++v) {
            if (!covered[static_cast<std::size_t>(v)]) {
                h.hyperedges.push_back({v});
                ++completions;
            }
        }
    }
    if (report != nullptr) {
        report->nodes = h.n;
        report->hyperedges = h.m();
        report->features = h.dim();
        report->classes = h.labels.num_classes();
        report->dedup_removed = stats.dedup_removed;
        report->singleton_completions = completions;
    }
    return h;
}

}  // namespace

Hypergraph build_citation_hypergraph(const std::vector<CitationRecord>& records,
                                     const std::vector<CitationPair>& pairs,
                                     IngestOptions options, IngestReport* report) {
    RecordTables tables = index_records(records);

    // citing index -> cited indices; pairs with unknown ids are dropped.
    std::unordered_map<int, std::vector<int>> cited_by;
    int dropped = 0;
    for (const auto& pair : pairs) {
        auto citing = tables.id_to_index.find(pair.citing_id);
        auto cited = tables.id_to_index.find(pair.cited_id);
        if (citing == tables.id_to_index.end() || cited == tables.id_to_index.end()) {
            ++dropped;
            continue;
        }
        cited_by[citing->second].push_back(cited->second);
    }

    // One hyperedge per citing paper, in record order.
    std::vector<std::vector<int>> edges;
    int citing_papers = 0;
    for (int a = 0; a < static_cast<int>(records.size()); ++a) {
        auto it = cited_by.find(a);
        if (it == cited_by.end()) continue;
        ++citing_papers;
        std::vector<int> edge = it->second;
        edge.push_back(a);
        edges.push_back(std::move(edge));
    }

    if (report != nullptr) {
        report->dropped_pairs = dropped;
        report->citing_papers = citing_papers;
    }
    return finish_build(std::move(tables), std::move(edges), options, report);
}

Hypergraph build_incidence_hypergraph(const std::vector<CitationRecord>& records,
                                      const std::vector<std::vector<std::string>>& edges,
                                      IngestOptions options, IngestReport* report) {
    RecordTables tables = index_records(records);
    std::vector<std::vector<int>> indexed;
    indexed.reserve(edges.size());
    for (const auto& edge : edges) {
        std::vector<int> members;
        members.reserve(edge.size());
        for (const auto& id : edge) {
            auto it = tables.id_to_index.find(id);
            if (it == tables.id_to_index.end()) {
                fail(ErrorKind::validation,
                     "incidence list references unknown node id '" + id + "'");
            }
            members.push_back(it->second);
        }
        indexed.push_back(std::move(members));
    }
    return finish_build(std::move(tables), std::move(indexed), options, report);
}

Split train_test_split(const LabelAssignment& labels, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
        fail(ErrorKind::validation, "train fraction must lie strictly between 0 and 1");
    }
    std::vector<int> labelled;
    labelled.reserve(labels.node_to_class.size());
    for (const auto& [node, cls] : labels.node_to_class) {
        (void)cls;
        labelled.push_back(node);  // ascending: node_to_class is ordered
    }
    if (labelled.size() < 2) {
        fail(ErrorKind::validation, "need at least 2 labelled nodes to split, have " +
                                        std::to_string(labelled.size()));
    }
    SplitMix64 rng(spec.seed);
    deterministic_shuffle(labelled, rng);

    const auto train_count = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(labelled.size())));
    Split split;
    split.train.assign(labelled.begin(), labelled.begin() + std::min(train_count, labelled.size()));
    split.test.assign(labelled.begin() + std::min(train_count, labelled.size()), labelled.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

}  // namespace lhcn
