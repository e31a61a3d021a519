#include "lhcn/backmap.hpp"

#include <algorithm>
#include <sstream>

namespace lhcn {

std::vector<int> argmax_rows(const Matrix& probs) {
    std::vector<int> out(probs.rows());
    for (std::size_t r = 0; r < probs.rows(); ++r) {
        const double* row = probs.row(r);
        int best = 0;
        for (std::size_t j = 1; j < probs.cols(); ++j) {
            if (row[j] > row[static_cast<std::size_t>(best)]) best = static_cast<int>(j);
        }
        out[r] = best;
    }
    return out;
}

std::vector<int> predict_line_labels(const GcnModel& model, const CsrMatrix& anorm,
                                     const Matrix& line_features) {
    return argmax_rows(forward(model, anorm, line_features).probs);
}

std::vector<int> backmap_labels(const Hypergraph& h, const std::vector<int>& line_preds) {
    if (line_preds.size() != static_cast<std::size_t>(h.m())) {
        fail(ErrorKind::validation, "line prediction count does not match hyperedge count");
    }
    int num_classes = h.labels.num_classes();
    for (int p : line_preds) num_classes = std::max(num_classes, p + 1);

    const auto node_edges = h.node_to_edges();
    std::vector<int> preds(static_cast<std::size_t>(h.n), -1);
    std::vector<int> votes(static_cast<std::size_t>(num_classes));
    for (int v = 0; v < h.n; ++v) {
        const auto& incident = node_edges[static_cast<std::size_t>(v)];
        if (incident.empty()) continue;  // unpredicted; only without singleton completion
        std::fill(votes.begin(), votes.end(), 0);
        for (int p : incident) ++votes[static_cast<std::size_t>(line_preds[(std::size_t)p])];
        int best = 0;
        for (int c = 1; c < num_classes; ++c) {
            if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) {
                best = c;
            }
        }
        preds[static_cast<std::size_t>(v)] = best;
    }
    return preds;
}

Matrix backmap_embeddings(const Hypergraph& h, const Matrix& line_embeddings) {
    if (line_embeddings.rows() != static_cast<std::size_t>(h.m())) {
        fail(ErrorKind::validation, "embedding row count does not match hyperedge count");
    }
    const std::size_t k = line_embeddings.cols();
    const auto node_edges = h.node_to_edges();
    Matrix out(static_cast<std::size_t>(h.n), k);
    for (int v = 0; v < h.n; ++v) {
        const auto& incident = node_edges[static_cast<std::size_t>(v)];
        if (incident.empty()) continue;  // zero row for uncovered nodes
        double* row = out.row(static_cast<std::size_t>(v));
        for (int p : incident) {
            const double* src = line_embeddings.row(static_cast<std::size_t>(p));
            for (std::size_t j = 0; j < k; ++j) row[j] += src[j];
        }
        const double inv = 1.0 / static_cast<double>(incident.size());
        for (std::size_t j = 0; j < k; ++j) row[j] *= inv;
    }
    return out;
}

Metrics evaluate(const std::vector<int>& node_preds, const LabelAssignment& truth,
                 const Split& split) {
    Metrics metrics;
    metrics.per_class_test_total.assign(static_cast<std::size_t>(truth.num_classes()), 0);
    metrics.per_class_test_correct.assign(static_cast<std::size_t>(truth.num_classes()), 0);

    for (int v : split.test) {
        const int actual = truth.class_of(v);
        if (actual < 0) continue;
        ++metrics.test_total;
        ++metrics.per_class_test_total[static_cast<std::size_t>(actual)];
        const int pred = v < static_cast<int>(node_preds.size())
                             ? node_preds[static_cast<std::size_t>(v)]
                             : -1;
        if (pred < 0) {
            ++metrics.unpredicted_test;
        } else if (pred == actual) {
            ++metrics.test_correct;
            ++metrics.per_class_test_correct[static_cast<std::size_t>(actual)];
        }
    }
    for (int v : split.train) {
        const int actual = truth.class_of(v);
        if (actual < 0) continue;
        ++metrics.train_total;
        const int pred = v < static_cast<int>(node_preds.size())
                             ? node_preds[static_cast<std::size_t>(v)]
                             : -1;
        if (pred >= 0 && pred == actual) ++metrics.train_correct;
    }
    metrics.test_accuracy = metrics.test_total > 0
                                ? static_cast<double>(metrics.test_correct) / metrics.test_total
                                : 0.0;
    metrics.train_accuracy = metrics.train_total > 0
                                 ? static_cast<double>(metrics.train_correct) / metrics.train_total
                                 : 0.0;
    return metrics;
}

std::string Metrics::to_text(const std::vector<std::string>& classes) const {
    std::ostringstream out;
    out << "test_accuracy = " << test_correct << "/" << test_total << " = ";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", test_accuracy);
    out << buf << "\n";
    out << "train_accuracy = " << train_correct << "/" << train_total << " = ";
    std::snprintf(buf, sizeof(buf), "%.6f", train_accuracy);
    out << buf << "\n";
    out << "unpredicted_test = " << unpredicted_test << "\n";
    for (std::size_t c = 0; c < per_class_test_total.size(); ++c) {
        const std::string name = c < classes.size() ? classes[c] : std::to_string(c);
        out << "class " << name << " = " << per_class_test_correct[c] << "/"
            << per_class_test_total[c] << "\n";
    }
    return out.str();
}

}  // namespace lhcn
