#pragma once

#include <string>
#include <vector>

#include "lhcn/citation.hpp"
#include "lhcn/gcn.hpp"
#include "lhcn/hypergraph.hpp"

namespace lhcn {

struct Metrics {
    double test_accuracy = 0.0;
    double train_accuracy = 0.0;
    int test_total = 0;
    int test_correct = 0;
    int train_total = 0;
    int train_correct = 0;
    int unpredicted_test = 0;  // test nodes without a prediction (no incident edge)
    std::vector<int> per_class_test_total;
    std::vector<int> per_class_test_correct;

    std::string to_text(const std::vector<std::string>& classes) const;
};

// Row argmax, ties towards the smaller class index.
std::vector<int> argmax_rows(const Matrix& probs);

// Class per line node from a trained model (argmax of the softmax output).
std::vector<int> predict_line_labels(const GcnModel& model, const CsrMatrix& anorm,
                                     const Matrix& line_features);

// Node v gets the majority class over the predictions of its incident
// hyperedges (one vote per incident edge), ties towards the smaller class
// index. Nodes in zero hyperedges get -1 (possible only with singleton
// completion disabled).
std::vector<int> backmap_labels(const Hypergraph& h, const std::vector<int>& line_preds);

// Row v = mean of the line-node embedding rows over the hyperedges
// containing v. Uncovered nodes get a zero row.
Matrix backmap_embeddings(const Hypergraph& h, const Matrix& line_embeddings);

// Accuracy over the test (and train) nodes; a missing prediction counts as
// wrong and is tallied in unpredicted_test.
Metrics evaluate(const std::vector<int>& node_preds, const LabelAssignment& truth,
                 const Split& split);

}  // namespace lhcn
