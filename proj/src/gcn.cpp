#include "lhcn/gcn.hpp"

#include <cmath>
#include <string>

#include "lhcn/rng.hpp"

namespace lhcn {

void TrainConfig::validate() const {
    if (hidden1 < 1 || hidden2 < 1) fail(ErrorKind::validation, "hidden sizes must be >= 1");
    if (epochs < 1) fail(ErrorKind::validation, "epochs must be >= 1");
    if (base_lr <= 0.0) fail(ErrorKind::validation, "base_lr must be > 0");
    if (lr_halving_period < 1) fail(ErrorKind::validation, "lr_halving_period must be >= 1");
    if (leaky_slope <= 0.0) fail(ErrorKind::validation, "leaky_slope must be > 0");
    if (dropout < 0.0 || dropout >= 1.0) fail(ErrorKind::validation, "dropout must be in [0, 1)");
    if (weight_decay < 0.0) fail(ErrorKind::validation, "weight_decay must be >= 0");
    if (split.train_fraction <= 0.0 || split.train_fraction >= 1.0) {
        fail(ErrorKind::validation, "train fraction must lie strictly between 0 and 1");
    }
}

namespace {

void fill_glorot(Matrix& mat, SplitMix64& rng) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(mat.rows() + mat.cols()));
    for (double& v : mat.data()) v = (2.0 * rng.next_double() - 1.0) * bound;
}

template <typename T>
void leaky_relu(const MatrixT<T>& pre, MatrixT<T>& out, T slope) {
    out = MatrixT<T>(pre.rows(), pre.cols());
    const auto& src = pre.data();
    auto& dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] > T{} ? src[i] : slope * src[i];
    }
}

// Derivative convention: 1 for pre > 0, slope otherwise (including exactly 0).
template <typename T>
void scale_by_leaky_derivative(MatrixT<T>& grad, const MatrixT<T>& pre, T slope) {
    auto& g = grad.data();
    const auto& z = pre.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(z[i] > T{})) g[i] *= slope;
    }
}

template <typename T>
void row_softmax(const MatrixT<T>& logits, MatrixT<T>& probs) {
    probs = MatrixT<T>(logits.rows(), logits.cols());
    const std::size_t n = logits.cols();
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        const T* in = logits.row(r);
        T* out = probs.row(r);
        T max = in[0];
        for (std::size_t j = 1; j < n; ++j) max = in[j] > max ? in[j] : max;
        T sum{};
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = std::exp(in[j] - max);
            sum += out[j];
        }
        const T inv = T(1) / sum;
        for (std::size_t j = 0; j < n; ++j) out[j] *= inv;
    }
}

template <typename T>
void check_finite(const MatrixT<T>& mat, const char* stage) {
    if (!mat.all_finite()) {
        fail(ErrorKind::numeric, std::string("non-finite values after stage ") + stage);
    }
}

template <typename T>
ForwardCacheT<T> forward_impl(const GcnModelT<T>& model, const CsrMatrixT<T>& anorm,
                              const MatrixT<T>& xl) {
    if (xl.cols() != model.theta1.rows()) {
        fail(ErrorKind::validation, "forward: feature dimension does not match theta1");
    }
    ForwardCacheT<T> cache;
    cache.z1pre = anorm.multiply(matmul(xl, model.theta1));
    check_finite(cache.z1pre, "z1pre");
    leaky_relu(cache.z1pre, cache.z1, model.leaky_slope);
    cache.z2pre = anorm.multiply(matmul(cache.z1, model.theta2));
    check_finite(cache.z2pre, "z2pre");
    leaky_relu(cache.z2pre, cache.hidden, model.leaky_slope);
    if (model.has_head) {
        cache.logits = matmul(cache.hidden, model.w_out);
    } else {
        cache.logits = cache.hidden;
    }
    check_finite(cache.logits, "logits");
    row_softmax(cache.logits, cache.probs);
    check_finite(cache.probs, "probs");
    return cache;
}

std::size_t count_labelled(const std::vector<int>& labels) {
    std::size_t c = 0;
    for (int l : labels) c += l >= 0 ? 1 : 0;
    return c;
}

template <typename T>
double masked_cross_entropy_impl(const MatrixT<T>& probs, const std::vector<int>& labels,
                                 bool mean, long* clamp_count) {
    if (labels.size() != probs.rows()) {
        fail(ErrorKind::validation, "loss: label count does not match row count");
    }
    constexpr double kLogFloor = 1e-12;
    double loss = 0.0;
    std::size_t labelled = 0;
    for (std::size_t p = 0; p < probs.rows(); ++p) {
        const int y = labels[p];
        if (y < 0) continue;
        if (static_cast<std::size_t>(y) >= probs.cols()) {
            fail(ErrorKind::validation, "loss: label out of range at line node " +
                                            std::to_string(p));
        }
        ++labelled;
        double q = static_cast<double>(probs(p, static_cast<std::size_t>(y)));
        if (q < kLogFloor) {
            q = kLogFloor;
            if (clamp_count != nullptr) ++*clamp_count;
        }
        loss -= std::log(q);
    }
    if (mean && labelled > 0) loss /= static_cast<double>(labelled);
    return loss;
}

template <typename T>
GradientsT<T> backward_impl(const GcnModelT<T>& model, const CsrMatrixT<T>& anorm,
                            const MatrixT<T>& xl, const ForwardCacheT<T>& cache,
                            const std::vector<int>& labels, bool mean) {
    const std::size_t rows = cache.probs.rows();
    const std::size_t num_classes = cache.probs.cols();
    const std::size_t labelled = count_labelled(labels);
    const T scale = mean && labelled > 0 ? T(1) / static_cast<T>(labelled) : T(1);

    // Softmax + cross entropy collapse to probs - onehot on labelled rows.
    MatrixT<T> dlogits(rows, num_classes);
    for (std::size_t p = 0; p < rows; ++p) {
        const int y = labels[p];
        if (y < 0) continue;
        const T* prow = cache.probs.row(p);
        T* drow = dlogits.row(p);
        for (std::size_t j = 0; j < num_classes; ++j) drow[j] = prow[j] * scale;
        drow[static_cast<std::size_t>(y)] -= scale;
    }

    GradientsT<T> grads;
    MatrixT<T> dhidden;
    if (model.has_head) {
        grads.w_out = matmul_transA(cache.hidden, dlogits);
        dhidden = matmul_transB(dlogits, model.w_out);
    } else {
        grads.w_out = MatrixT<T>();
        dhidden = std::move(dlogits);
    }

    scale_by_leaky_derivative(dhidden, cache.z2pre, model.leaky_slope);  // now d z2pre
    // z2pre = anorm * (z1 * theta2); anorm is symmetric, so the adjoint of
    // the propagation step is another multiply by anorm.
    MatrixT<T> g2 = anorm.multiply(dhidden);
    grads.theta2 = matmul_transA(cache.z1, g2);

    MatrixT<T> dz1 = matmul_transB(g2, model.theta2);
    scale_by_leaky_derivative(dz1, cache.z1pre, model.leaky_slope);  // now d z1pre
    MatrixT<T> g1 = anorm.multiply(dz1);
    grads.theta1 = matmul_transA(xl, g1);
    return grads;
}

template <typename T>
void adam_update_one(MatrixT<T>& param, const MatrixT<T>& grad, MatrixT<T>& m, MatrixT<T>& v,
                     T beta1, T beta2, T eps, T lr, T bias1, T bias2, T weight_decay) {
    auto& p = param.data();
    const auto& g = grad.data();
    auto& mm = m.data();
    auto& vv = v.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const T gi = g[i] + weight_decay * p[i];
        mm[i] = beta1 * mm[i] + (T(1) - beta1) * gi;
        vv[i] = beta2 * vv[i] + (T(1) - beta2) * gi * gi;
        const T mhat = mm[i] / bias1;
        const T vhat = vv[i] / bias2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

template <typename T>
void adam_step_impl(GcnModelT<T>& model, const GradientsT<T>& grads, AdamStateT<T>& state, T lr,
                    T weight_decay) {
    state.step += 1;
    const T bias1 = T(1) - std::pow(state.beta1, static_cast<T>(state.step));
    const T bias2 = T(1) - std::pow(state.beta2, static_cast<T>(state.step));
    adam_update_one(model.theta1, grads.theta1, state.m_theta1, state.v_theta1, state.beta1,
                    state.beta2, state.eps, lr, bias1, bias2, weight_decay);
    adam_update_one(model.theta2, grads.theta2, state.m_theta2, state.v_theta2, state.beta1,
                    state.beta2, state.eps, lr, bias1, bias2, weight_decay);
    if (model.has_head) {
        adam_update_one(model.w_out, grads.w_out, state.m_wout, state.v_wout, state.beta1,
                        state.beta2, state.eps, lr, bias1, bias2, weight_decay);
    }
}

// Inverted dropout on the input features; the mask is regenerated per epoch
// from a stream derived from the init seed, so runs stay reproducible.
template <typename T>
MatrixT<T> dropout_features(const MatrixT<T>& xl, double rate, std::uint64_t seed, int epoch) {
    SplitMix64 rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(epoch)));
    MatrixT<T> out = xl;
    const T keep_inv = T(1) / static_cast<T>(1.0 - rate);
    for (T& v : out.data()) {
        v = rng.next_double() < rate ? T{} : v * keep_inv;
    }
    return out;
}

template <typename T>
std::pair<GcnModelT<T>, RunReport> train_impl(GcnModelT<T> model, const CsrMatrixT<T>& anorm,
                                              const MatrixT<T>& xl, const std::vector<int>& labels,
                                              const TrainConfig& cfg) {
    AdamStateT<T> state = AdamStateT<T>::like(model, static_cast<T>(cfg.adam_beta1),
                                              static_cast<T>(cfg.adam_beta2),
                                              static_cast<T>(cfg.adam_eps));
    RunReport report;
    report.loss.reserve(static_cast<std::size_t>(cfg.epochs));
    report.lr.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const MatrixT<T>* input = &xl;
        MatrixT<T> dropped;
        if (cfg.dropout > 0.0) {
            dropped = dropout_features(xl, cfg.dropout, cfg.init_seed, epoch);
            input = &dropped;
        }
        ForwardCacheT<T> cache = forward_impl(model, anorm, *input);
        const double loss =
            masked_cross_entropy_impl(cache.probs, labels, cfg.loss_mean, &report.log_clamp_count);
        if (!std::isfinite(loss)) {
            fail(ErrorKind::numeric, "training loss became non-finite at epoch " +
                                         std::to_string(epoch));
        }
        const double lr = lr_at(epoch, cfg);
        report.loss.push_back(loss);
        report.lr.push_back(lr);

        GradientsT<T> grads = backward_impl(model, anorm, *input, cache, labels, cfg.loss_mean);
        adam_step_impl(model, grads, state, static_cast<T>(lr),
                       static_cast<T>(cfg.weight_decay));
    }
    return {std::move(model), std::move(report)};
}

}  // namespace

GcnModel init_params(const TrainConfig& cfg, int feature_dim, int num_classes) {
    cfg.validate();
    if (feature_dim < 1) fail(ErrorKind::validation, "feature dimension must be >= 1");
    if (num_classes < 2) fail(ErrorKind::validation, "need at least 2 classes");
    if (!cfg.use_head && cfg.hidden2 != num_classes) {
        fail(ErrorKind::validation,
             "without a classifier head, hidden2 must equal the class count (" +
                 std::to_string(cfg.hidden2) + " vs " + std::to_string(num_classes) + ")");
    }
    GcnModel model;
    model.leaky_slope = cfg.leaky_slope;
    model.has_head = cfg.use_head;
    model.theta1 = Matrix(static_cast<std::size_t>(feature_dim),
                          static_cast<std::size_t>(cfg.hidden1));
    model.theta2 = Matrix(static_cast<std::size_t>(cfg.hidden1),
                          static_cast<std::size_t>(cfg.hidden2));
    SplitMix64 rng(cfg.init_seed);
    fill_glorot(model.theta1, rng);
    fill_glorot(model.theta2, rng);
    if (cfg.use_head) {
        model.w_out = Matrix(static_cast<std::size_t>(cfg.hidden2),
                             static_cast<std::size_t>(num_classes));
        fill_glorot(model.w_out, rng);
    }
    return model;
}

ForwardCache forward(const GcnModel& model, const CsrMatrix& anorm, const Matrix& line_features) {
    return forward_impl(model, anorm, line_features);
}

double masked_cross_entropy(const Matrix& probs, const std::vector<int>& labels, bool mean,
                            long* clamp_count) {
    return masked_cross_entropy_impl(probs, labels, mean, clamp_count);
}

Gradients backward(const GcnModel& model, const CsrMatrix& anorm, const Matrix& line_features,
                   const ForwardCache& cache, const std::vector<int>& labels, bool mean) {
    return backward_impl(model, anorm, line_features, cache, labels, mean);
}

void adam_step(GcnModel& model, const Gradients& grads, AdamState& state, double lr,
               double weight_decay) {
    if (lr <= 0.0) fail(ErrorKind::validation, "learning rate must be > 0");
    adam_step_impl(model, grads, state, lr, weight_decay);
}

double lr_at(int epoch, const TrainConfig& cfg) {
    if (epoch < 0) fail(ErrorKind::validation, "epoch must be >= 0");
    return std::ldexp(cfg.base_lr, -(epoch / cfg.lr_halving_period));
}

TrainOutput train(const LineGraph& lg, int num_classes, const TrainConfig& cfg) {
    cfg.validate();
    if (lg.labels.size() != static_cast<std::size_t>(lg.m)) {
        fail(ErrorKind::validation, "line graph labels not initialized");
    }
    std::size_t labelled = 0;
    for (int l : lg.labels) labelled += l >= 0 ? 1 : 0;
    if (labelled == 0) fail(ErrorKind::validation, "no labelled line nodes to train on");

    const CsrMatrix anorm = normalize_adjacency(lg.adjacency);
    GcnModel model = init_params(cfg, static_cast<int>(lg.features.cols()), num_classes);

    TrainOutput out;
    if (cfg.float32) {
        auto [model32, report] =
            train_impl<float>(model.cast<float>(), anorm.cast<float>(),
                              lg.features.cast<float>(), lg.labels, cfg);
        out.model = model32.cast<double>();
        out.report = std::move(report);
    } else {
        auto [model64, report] = train_impl<double>(std::move(model), anorm, lg.features,
                                                    lg.labels, cfg);
        out.model = std::move(model64);
        out.report = std::move(report);
    }
    return out;
}

}  // namespace lhcn
