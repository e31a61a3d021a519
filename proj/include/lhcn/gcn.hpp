#pragma once

#include <cstdint>
#include <vector>

#include "lhcn/citation.hpp"
#include "lhcn/line_graph.hpp"
#include "lhcn/matrix.hpp"

namespace lhcn {

// Everything that determines a training run, together with the input data.
struct TrainConfig {
    int hidden1 = 32;            // columns of theta1
    int hidden2 = 16;            // columns of theta2; embedding width
    int epochs = 200;
    double base_lr = 0.01;
    int lr_halving_period = 100; // epochs between halvings
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double leaky_slope = 0.01;
    bool use_head = true;        // linear classifier on top of the embedding
    bool loss_mean = false;      // false: sum over labelled nodes; true: mean
    double dropout = 0.0;        // input-feature dropout rate during training
    double weight_decay = 0.0;   // L2 coefficient folded into the gradients
    bool float32 = false;        // train in single precision
    std::uint64_t init_seed = 1;
    SplitSpec split;

    void validate() const;
};

// Two graph-convolution layers plus an optional linear head. With the head,
// the m x hidden2 output of layer two stays available as the node embedding
// while classification happens in a trained hidden2 x num_classes map; in
// no-head mode hidden2 must equal the class count and the embedding itself
// feeds the softmax.
template <typename T>
struct GcnModelT {
    MatrixT<T> theta1;  // d x hidden1
    MatrixT<T> theta2;  // hidden1 x hidden2
    MatrixT<T> w_out;   // hidden2 x num_classes; empty when !has_head
    T leaky_slope = T(0.01);
    bool has_head = true;

    int num_classes() const {
        return static_cast<int>(has_head ? w_out.cols() : theta2.cols());
    }

    template <typename U>
    GcnModelT<U> cast() const {
        GcnModelT<U> out;
        out.theta1 = theta1.template cast<U>();
        out.theta2 = theta2.template cast<U>();
        out.w_out = w_out.template cast<U>();
        out.leaky_slope = static_cast<U>(leaky_slope);
        out.has_head = has_head;
        return out;
    }
};
using GcnModel = GcnModelT<double>;

template <typename T>
struct GradientsT {
    MatrixT<T> theta1, theta2, w_out;
};
using Gradients = GradientsT<double>;

// First/second-moment accumulators per parameter matrix and one shared step
// counter that increments by exactly 1 per adam_step.
template <typename T>
struct AdamStateT {
    MatrixT<T> m_theta1, v_theta1;
    MatrixT<T> m_theta2, v_theta2;
    MatrixT<T> m_wout, v_wout;
    long step = 0;
    T beta1, beta2, eps;

    static AdamStateT like(const GcnModelT<T>& model, T beta1, T beta2, T eps) {
        AdamStateT s;
        s.m_theta1 = MatrixT<T>(model.theta1.rows(), model.theta1.cols());
        s.v_theta1 = MatrixT<T>(model.theta1.rows(), model.theta1.cols());
        s.m_theta2 = MatrixT<T>(model.theta2.rows(), model.theta2.cols());
        s.v_theta2 = MatrixT<T>(model.theta2.rows(), model.theta2.cols());
        s.m_wout = MatrixT<T>(model.w_out.rows(), model.w_out.cols());
        s.v_wout = MatrixT<T>(model.w_out.rows(), model.w_out.cols());
        s.beta1 = beta1;
        s.beta2 = beta2;
        s.eps = eps;
        return s;
    }
};
using AdamState = AdamStateT<double>;

template <typename T>
struct ForwardCacheT {
    MatrixT<T> z1pre;   // anorm * X * theta1
    MatrixT<T> z1;      // leaky(z1pre)
    MatrixT<T> z2pre;   // anorm * z1 * theta2
    MatrixT<T> hidden;  // leaky(z2pre): the line-node embedding
    MatrixT<T> logits;
    MatrixT<T> probs;   // row softmax of logits
};
using ForwardCache = ForwardCacheT<double>;

struct RunReport {
    std::vector<double> loss;  // loss at the parameters entering each epoch
    std::vector<double> lr;    // learning rate used in that epoch, == lr_at(epoch)
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    long log_clamp_count = 0;  // times a predicted probability hit the log floor

    double ingest_seconds = 0.0;
    double transform_seconds = 0.0;
    double train_seconds = 0.0;
    double backmap_seconds = 0.0;
    double total_seconds = 0.0;
};

// Glorot-uniform initialization: entries uniform in +-sqrt(6 / (fan_in +
// fan_out)), drawn from SplitMix64(init_seed) filling theta1, theta2, w_out
// row-major in that order. Bit-identical for equal seeds.
GcnModel init_params(const TrainConfig& cfg, int feature_dim, int num_classes);

// Full forward pass. Throws a numeric error naming the first stage that
// produces a non-finite value. Softmax subtracts the row maximum.
ForwardCache forward(const GcnModel& model, const CsrMatrix& anorm, const Matrix& line_features);

// -sum over labelled rows of ln probs[p][label(p)] (mean instead of sum when
// `mean`). Probabilities are floored at 1e-12 before the log; clamp_count,
// when given, is incremented once per floored term.
double masked_cross_entropy(const Matrix& probs, const std::vector<int>& labels,
                            bool mean = false, long* clamp_count = nullptr);

// Analytic gradients of masked_cross_entropy via the chain rule. The
// softmax+CE gradient at labelled rows is probs - onehot, zero elsewhere;
// the leaky-ReLU derivative at exactly zero is the slope; the adjacency is
// symmetric, so its transpose never needs materializing.
Gradients backward(const GcnModel& model, const CsrMatrix& anorm, const Matrix& line_features,
                   const ForwardCache& cache, const std::vector<int>& labels, bool mean = false);

// Bias-corrected Adam update, applied to every parameter matrix; increments
// state.step once. weight_decay adds wd * theta to the raw gradient.
void adam_step(GcnModel& model, const Gradients& grads, AdamState& state, double lr,
               double weight_decay = 0.0);

// base_lr / 2^floor(epoch / period), epoch counted from 0.
double lr_at(int epoch, const TrainConfig& cfg);

struct TrainOutput {
    GcnModel model;
    RunReport report;
};

// Full-batch loop: forward, loss, backward, adam_step with lr_at(epoch).
// Requires at least one labelled line node; aborts with the epoch number if
// the loss turns non-finite. Deterministic given the config.
TrainOutput train(const LineGraph& lg, int num_classes, const TrainConfig& cfg);

}  // namespace lhcn
