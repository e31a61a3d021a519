// Shared test helpers: independent oracles and small random generators.
// Everything here is deliberately written as straight-line loops over dense
// data so it cannot share a code path with the library implementation.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lhcn/backmap.hpp"
#include "lhcn/gcn.hpp"
#include "lhcn/hypergraph.hpp"
#include "lhcn/line_graph.hpp"
#include "lhcn/rng.hpp"

namespace lhcn::testutil {

// All-pairs reference for the line-graph adjacency: intersection and union
// computed with <algorithm> set operations, one pair at a time.
inline CsrMatrix brute_force_line_adjacency(const Hypergraph& h) {
    const int m = h.m();
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(
        static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
            if (p == q) continue;
            const auto& ep = h.hyperedges[static_cast<std::size_t>(p)];
            const auto& eq = h.hyperedges[static_cast<std::size_t>(q)];
            std::vector<int> inter;
            std::set_intersection(ep.begin(), ep.end(), eq.begin(), eq.end(),
                                  std::back_inserter(inter));
            if (inter.empty()) continue;
            const auto uni = static_cast<double>(ep.size() + eq.size() - inter.size());
            rows[static_cast<std::size_t>(p)].emplace_back(
                q, static_cast<double>(inter.size()) / uni);
        }
    }
    return CsrMatrix::from_rows(static_cast<std::size_t>(m), static_cast<std::size_t>(m), rows);
}

// Straight-line dense forward pass with explicit loops.
struct LoopForward {
    Matrix z1pre, z1, z2pre, hidden, logits, probs;
};

inline Matrix loop_matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    return c;
}

inline LoopForward loop_forward(const GcnModel& model, const Matrix& anorm_dense,
                                const Matrix& xl) {
    LoopForward f;
    const auto leaky = [&](const Matrix& in) {
        Matrix out(in.rows(), in.cols());
        for (std::size_t i = 0; i < in.rows(); ++i) {
            for (std::size_t j = 0; j < in.cols(); ++j) {
                const double v = in(i, j);
                out(i, j) = v > 0.0 ? v : model.leaky_slope * v;
            }
        }
        return out;
    };
    f.z1pre = loop_matmul(anorm_dense, loop_matmul(xl, model.theta1));
    f.z1 = leaky(f.z1pre);
    f.z2pre = loop_matmul(anorm_dense, loop_matmul(f.z1, model.theta2));
    f.hidden = leaky(f.z2pre);
    f.logits = model.has_head ? loop_matmul(f.hidden, model.w_out) : f.hidden;
    f.probs = Matrix(f.logits.rows(), f.logits.cols());
    for (std::size_t r = 0; r < f.logits.rows(); ++r) {
        double mx = f.logits(r, 0);
        for (std::size_t j = 1; j < f.logits.cols(); ++j) mx = std::max(mx, f.logits(r, j));
        double sum = 0.0;
        for (std::size_t j = 0; j < f.logits.cols(); ++j) {
            f.probs(r, j) = std::exp(f.logits(r, j) - mx);
            sum += f.probs(r, j);
        }
        for (std::size_t j = 0; j < f.logits.cols(); ++j) f.probs(r, j) /= sum;
    }
    return f;
}

// Central finite differences of the masked loss with respect to every
// parameter entry, compared against the analytic gradients. The error is
// |analytic - numeric| / max(1, |analytic|, |numeric|), so tiny gradients
// are judged absolutely and large ones relatively.
struct FdCheck {
    double max_rel_error = 0.0;
    double min_abs_preactivation = 1e300;  // distance to the activation kink
};

inline FdCheck finite_difference_check(const GcnModel& model, const CsrMatrix& anorm,
                                       const Matrix& xl, const std::vector<int>& labels,
                                       bool mean = false, double step = 1e-5) {
    const auto loss_of = [&](const GcnModel& m) {
        return masked_cross_entropy(forward(m, anorm, xl).probs, labels, mean);
    };

    FdCheck check;
    const ForwardCache cache = forward(model, anorm, xl);
    for (const Matrix* pre : {&cache.z1pre, &cache.z2pre}) {
        for (double v : pre->data()) {
            check.min_abs_preactivation = std::min(check.min_abs_preactivation, std::abs(v));
        }
    }
    const Gradients analytic = backward(model, anorm, xl, cache, labels, mean);

    const auto check_param = [&](Matrix GcnModel::*field, const Matrix& grad) {
        GcnModel probe = model;
        Matrix& target = probe.*field;
        for (std::size_t i = 0; i < target.data().size(); ++i) {
            const double saved = target.data()[i];
            target.data()[i] = saved + step;
            const double up = loss_of(probe);
            target.data()[i] = saved - step;
            const double down = loss_of(probe);
            target.data()[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double a = grad.data()[i];
            const double rel =
                std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
            check.max_rel_error = std::max(check.max_rel_error, rel);
        }
    };
    check_param(&GcnModel::theta1, analytic.theta1);
    check_param(&GcnModel::theta2, analytic.theta2);
    if (model.has_head) check_param(&GcnModel::w_out, analytic.w_out);
    return check;
}

// Random small hypergraph; duplicate edges allowed so weight-1 twins occur.
inline Hypergraph random_tiny_hypergraph(SplitMix64& rng, int max_n = 12, int max_m = 8) {
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n)));
    const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_m)));
    std::vector<std::vector<int>> edges;
    for (int j = 0; j < m; ++j) {
        std::vector<int> edge;
        for (int v = 0; v < n; ++v) {
            if (rng.next_double() < 0.35) edge.push_back(v);
        }
        if (edge.empty()) edge.push_back(static_cast<int>(rng.below((std::uint64_t)n)));
        edges.push_back(std::move(edge));
    }
    std::vector<std::string> ids;
    for (int v = 0; v < n; ++v) ids.push_back("v" + std::to_string(v));
    Matrix features(static_cast<std::size_t>(n), 2);
    for (double& f : features.data()) f = rng.next_double();
    return build_hypergraph_indexed(std::move(ids), std::move(edges), std::move(features),
                                    LabelAssignment{}, BuildOptions{/*dedup_edges=*/false});
}

// The worked 7-node / 4-edge example: e1={A,B,C}, e2={C,D}, e3={C,E,F,G},
// e4={F,G}. Expected line-graph weights: (e1,e2)=1/4, (e1,e3)=1/6,
// (e2,e3)=1/5, (e3,e4)=1/2, and no other edges.
inline Hypergraph worked_fixture() {
    std::vector<std::string> ids = {"A", "B", "C", "D", "E", "F", "G"};
    std::vector<std::vector<int>> edges = {{0, 1, 2}, {2, 3}, {2, 4, 5, 6}, {5, 6}};
    Matrix features(7, 3);
    for (std::size_t i = 0; i < 7; ++i) features(i, i % 3) = 1.0;
    LabelAssignment labels;
    labels.classes = {"1", "2"};
    labels.node_to_class = {{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 0}, {5, 0}, {6, 1}};
    return build_hypergraph_indexed(std::move(ids), std::move(edges), std::move(features),
                                    std::move(labels));
}

// Random trained-shape instance for gradient checks; labels partially -1.
struct GcnInstance {
    CsrMatrix anorm;
    Matrix features;
    std::vector<int> labels;
    GcnModel model;
};

inline GcnInstance random_gcn_instance(SplitMix64& rng, bool use_head = true) {
    GcnInstance inst;
    Hypergraph h = random_tiny_hypergraph(rng, 10, 10);
    const LineGraph lg = build_line_graph(h);
    inst.anorm = normalize_adjacency(lg.adjacency);

    const int m = lg.m;
    const int d = 1 + static_cast<int>(rng.below(5));
    const int num_classes = 2 + static_cast<int>(rng.below(2));
    TrainConfig cfg;
    cfg.hidden1 = 1 + static_cast<int>(rng.below(4));
    cfg.hidden2 = use_head ? 1 + static_cast<int>(rng.below(4)) : num_classes;
    cfg.use_head = use_head;
    cfg.init_seed = rng.next();
    inst.model = init_params(cfg, d, num_classes);

    inst.features = Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(d));
    for (double& f : inst.features.data()) f = 2.0 * rng.next_double() - 1.0;
    inst.labels.resize(static_cast<std::size_t>(m));
    bool any = false;
    for (int p = 0; p < m; ++p) {
        const bool labelled = rng.next_double() < 0.7;
        inst.labels[static_cast<std::size_t>(p)] =
            labelled ? static_cast<int>(rng.below((std::uint64_t)num_classes)) : -1;
        any = any || labelled;
    }
    if (!any) inst.labels[0] = 0;
    return inst;
}

}  // namespace lhcn::testutil
