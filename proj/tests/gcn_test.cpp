#include <doctest.h>

#include <cmath>

#include "lhcn/gcn.hpp"
#include "testutil.hpp"

using namespace lhcn;

namespace {

CsrMatrix identity_anorm(std::size_t m) {
    std::vector<std::vector<std::pair<std::int32_t, double>>> rows(m);
    for (std::size_t p = 0; p < m; ++p) rows[p] = {{static_cast<std::int32_t>(p), 1.0}};
    return CsrMatrix::from_rows(m, m, rows);
}

GcnModel tiny_model(double slope = 0.01) {
    GcnModel model;
    model.theta1 = Matrix(1, 1, 1.0);
    model.theta2 = Matrix(1, 1, 1.0);
    model.w_out = Matrix(1, 2);  // zero head -> uniform probabilities
    model.leaky_slope = slope;
    model.has_head = true;
    return model;
}

}  // namespace

TEST_CASE("init_params is deterministic and Glorot-bounded") {
    TrainConfig cfg;
    cfg.init_seed = 99;
    const GcnModel a = init_params(cfg, 1433, 7);
    const GcnModel b = init_params(cfg, 1433, 7);
    CHECK(a.theta1.data() == b.theta1.data());
    CHECK(a.theta2.data() == b.theta2.data());
    CHECK(a.w_out.data() == b.w_out.data());

    cfg.init_seed = 100;
    const GcnModel c = init_params(cfg, 1433, 7);
    CHECK(a.theta1.data() != c.theta1.data());

    CHECK(a.theta1.rows() == 1433);
    CHECK(a.theta1.cols() == 32);
    CHECK(a.theta2.rows() == 32);
    CHECK(a.theta2.cols() == 16);
    CHECK(a.w_out.rows() == 16);
    CHECK(a.w_out.cols() == 7);

    const double bound = std::sqrt(6.0 / (1433.0 + 32.0));  // ~0.0640
    double max_abs = 0.0;
    for (double v : a.theta1.data()) max_abs = std::max(max_abs, std::abs(v));
    CHECK(max_abs <= bound);
    CHECK(max_abs > 0.5 * bound);  // the draw actually fills the range
}

TEST_CASE("init_params without a head requires hidden2 == classes") {
    TrainConfig cfg;
    cfg.use_head = false;
    cfg.hidden2 = 7;
    CHECK_THROWS_AS(init_params(cfg, 10, 3), Error);
    cfg.hidden2 = 3;
    const GcnModel model = init_params(cfg, 10, 3);
    CHECK(model.w_out.empty());
    CHECK(model.num_classes() == 3);
}

TEST_CASE("forward with a zero head yields uniform probabilities") {
    const ForwardCache cache = forward(tiny_model(), identity_anorm(1), Matrix(1, 1, 1.0));
    CHECK(cache.probs(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cache.probs(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cache.hidden(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("forward on all-zero features gives zero embeddings and uniform rows") {
    SplitMix64 rng(17);
    const auto inst = testutil::random_gcn_instance(rng);
    const Matrix zeros(inst.features.rows(), inst.features.cols());
    const ForwardCache cache = forward(inst.model, inst.anorm, zeros);
    for (double v : cache.hidden.data()) CHECK(v == 0.0);
    const double uniform = 1.0 / static_cast<double>(cache.probs.cols());
    for (double v : cache.probs.data()) CHECK(v == doctest::Approx(uniform).epsilon(1e-12));
}

TEST_CASE("forward matches the straight-line loop implementation") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const auto inst = testutil::random_gcn_instance(rng, trial % 2 == 0);
        const ForwardCache cache = forward(inst.model, inst.anorm, inst.features);
        const auto oracle =
            testutil::loop_forward(inst.model, inst.anorm.to_dense(), inst.features);
        REQUIRE(cache.probs.rows() == oracle.probs.rows());
        for (std::size_t i = 0; i < cache.probs.data().size(); ++i) {
            CHECK(cache.probs.data()[i] ==
                  doctest::Approx(oracle.probs.data()[i]).epsilon(1e-12));
        }
        for (std::size_t i = 0; i < cache.hidden.data().size(); ++i) {
            CHECK(cache.hidden.data()[i] ==
                  doctest::Approx(oracle.hidden.data()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("softmax rows sum to one and ignore constant shifts") {
    SplitMix64 rng(23);
    const auto inst = testutil::random_gcn_instance(rng);
    const ForwardCache cache = forward(inst.model, inst.anorm, inst.features);
    for (std::size_t r = 0; r < cache.probs.rows(); ++r) {
        double sum = 0.0;
        for (std::size_t j = 0; j < cache.probs.cols(); ++j) sum += cache.probs(r, j);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Shifting one logits row by a constant must not move the probabilities.
    // Identity layers feed the logits through untouched.
    GcnModel no_head;
    no_head.theta1 = Matrix(2, 2);
    no_head.theta1(0, 0) = 1.0;
    no_head.theta1(1, 1) = 1.0;
    no_head.theta2 = no_head.theta1;
    no_head.has_head = false;
    no_head.leaky_slope = 1.0;  // identity activation for positive and negative
    Matrix logits(1, 2);
    logits(0, 0) = 0.4;
    logits(0, 1) = 1.3;
    Matrix shifted_logits(1, 2);
    shifted_logits(0, 0) = 0.4 + 3.5;
    shifted_logits(0, 1) = 1.3 + 3.5;
    const ForwardCache base = forward(no_head, identity_anorm(1), logits);
    const ForwardCache moved = forward(no_head, identity_anorm(1), shifted_logits);
    CHECK(base.probs(0, 0) == doctest::Approx(moved.probs(0, 0)).epsilon(1e-12));
    CHECK(base.probs(0, 1) == doctest::Approx(moved.probs(0, 1)).epsilon(1e-12));
}

TEST_CASE("masked cross entropy matches hand-computed values") {
    Matrix probs(3, 2, 0.5);
    SUBCASE("one labelled node with uniform probabilities") {
        const std::vector<int> labels = {0, -1, -1};
        CHECK(masked_cross_entropy(probs, labels) ==
              doctest::Approx(std::log(2.0)).epsilon(1e-15));
    }
    SUBCASE("perfect predictions give zero loss") {
        Matrix perfect(2, 2);
        perfect(0, 0) = 1.0;
        perfect(1, 1) = 1.0;
        CHECK(masked_cross_entropy(perfect, {0, 1}) == 0.0);
    }
    SUBCASE("three labelled nodes at 1/2, 1/4, 1/8 sum to 6 ln 2") {
        Matrix p(3, 2);
        p(0, 0) = 0.5;
        p(0, 1) = 0.5;
        p(1, 0) = 0.25;
        p(1, 1) = 0.75;
        p(2, 0) = 0.125;
        p(2, 1) = 0.875;
        CHECK(masked_cross_entropy(p, {0, 0, 0}) ==
              doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-14));
        CHECK(masked_cross_entropy(p, {0, 0, 0}, /*mean=*/true) ==
              doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    }
    SUBCASE("zero probability clamps and counts a warning") {
        Matrix p(1, 2);
        p(0, 0) = 0.0;
        p(0, 1) = 1.0;
        long clamps = 0;
        const double loss = masked_cross_entropy(p, {0}, false, &clamps);
        CHECK(clamps == 1);
        CHECK(loss == doctest::Approx(-std::log(1e-12)).epsilon(1e-12));
    }
}

TEST_CASE("backward is zero when nothing is labelled or predictions are exact") {
    SplitMix64 rng(47);
    const auto inst = testutil::random_gcn_instance(rng);
    const ForwardCache cache = forward(inst.model, inst.anorm, inst.features);

    const std::vector<int> unlabelled(inst.labels.size(), -1);
    const Gradients g = backward(inst.model, inst.anorm, inst.features, cache, unlabelled);
    for (double v : g.theta1.data()) CHECK(v == 0.0);
    for (double v : g.theta2.data()) CHECK(v == 0.0);
    for (double v : g.w_out.data()) CHECK(v == 0.0);

    // A artificial cache with probability 1 on the true class: probs - onehot = 0.
    ForwardCache perfect = cache;
    perfect.probs = Matrix(cache.probs.rows(), cache.probs.cols());
    std::vector<int> labels(inst.labels.size(), 0);
    for (std::size_t p = 0; p < perfect.probs.rows(); ++p) perfect.probs(p, 0) = 1.0;
    const Gradients g2 = backward(inst.model, inst.anorm, inst.features, perfect, labels);
    for (double v : g2.w_out.data()) CHECK(v == 0.0);
    for (double v : g2.theta1.data()) CHECK(v == 0.0);
    for (double v : g2.theta2.data()) CHECK(v == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
    SplitMix64 rng(1234);
    int done = 0;
    while (done < 10) {
        const auto inst = testutil::random_gcn_instance(rng, done % 2 == 0);
        const auto check = testutil::finite_difference_check(inst.model, inst.anorm,
                                                             inst.features, inst.labels,
                                                             done % 3 == 0);
        if (check.min_abs_preactivation < 1e-4) continue;  // too close to the kink
        CHECK(check.max_rel_error < 1e-5);
        ++done;
    }
}

TEST_CASE("adam leaves parameters alone on zero gradients") {
    GcnModel model = tiny_model();
    model.w_out(0, 0) = 0.7;
    AdamState state = AdamState::like(model, 0.9, 0.999, 1e-8);
    Gradients g;
    g.theta1 = Matrix(1, 1);
    g.theta2 = Matrix(1, 1);
    g.w_out = Matrix(1, 2);
    adam_step(model, g, state, 0.01);
    CHECK(model.theta1(0, 0) == 1.0);
    CHECK(model.w_out(0, 0) == 0.7);
    CHECK(state.step == 1);
}

TEST_CASE("one adam step on a unit gradient moves by about -lr") {
    GcnModel model = tiny_model();
    model.theta1(0, 0) = 0.0;
    AdamState state = AdamState::like(model, 0.9, 0.999, 1e-8);
    Gradients g;
    g.theta1 = Matrix(1, 1, 1.0);
    g.theta2 = Matrix(1, 1);
    g.w_out = Matrix(1, 2);
    adam_step(model, g, state, 0.01);
    // bias-corrected m-hat = v-hat = 1, so the step is lr / (1 + eps).
    CHECK(model.theta1(0, 0) == doctest::Approx(-0.01).epsilon(1e-7));
}

TEST_CASE("adam increments the shared step counter once per call") {
    GcnModel model = tiny_model();
    AdamState state = AdamState::like(model, 0.9, 0.999, 1e-8);
    Gradients g;
    g.theta1 = Matrix(1, 1, 0.5);
    g.theta2 = Matrix(1, 1, 0.5);
    g.w_out = Matrix(1, 2, 0.5);
    CHECK(state.step == 0);
    adam_step(model, g, state, 0.01);
    CHECK(state.step == 1);
    adam_step(model, g, state, 0.01);
    CHECK(state.step == 2);
}

TEST_CASE("learning rate halves every period") {
    TrainConfig cfg;
    cfg.base_lr = 0.01;
    CHECK(lr_at(0, cfg) == 0.01);
    CHECK(lr_at(99, cfg) == 0.01);
    CHECK(lr_at(100, cfg) == 0.005);
    CHECK(lr_at(250, cfg) == 0.0025);
    cfg.lr_halving_period = 50;
    CHECK(lr_at(100, cfg) == 0.0025);
    CHECK_THROWS_AS(lr_at(-1, cfg), Error);
}

namespace {

LineGraph labelled_fixture_line_graph() {
    const Hypergraph h = testutil::worked_fixture();
    LineGraph lg = build_line_graph(h);
    lg.features = derive_line_attributes(h, h.features);
    lg.labels = transfer_labels(h, h.labels);  // all nodes labelled
    return lg;
}

}  // namespace

TEST_CASE("training reduces the loss on the worked fixture") {
    const LineGraph lg = labelled_fixture_line_graph();
    TrainConfig cfg;
    cfg.hidden1 = 4;
    cfg.hidden2 = 3;
    cfg.epochs = 200;
    const TrainOutput out = train(lg, 2, cfg);
    REQUIRE(out.report.loss.size() == 200);
    CHECK(out.report.loss.back() < out.report.loss.front());
    CHECK(out.model.theta1.all_finite());
}

TEST_CASE("reported learning rates equal lr_at pointwise") {
    const LineGraph lg = labelled_fixture_line_graph();
    TrainConfig cfg;
    cfg.hidden1 = 2;
    cfg.hidden2 = 2;
    cfg.epochs = 230;
    const TrainOutput out = train(lg, 2, cfg);
    REQUIRE(out.report.lr.size() == 230);
    for (int e = 0; e < 230; ++e) {
        CHECK(out.report.lr[static_cast<std::size_t>(e)] == lr_at(e, cfg));
    }
}

TEST_CASE("training twice yields bit-identical loss traces") {
    const LineGraph lg = labelled_fixture_line_graph();
    TrainConfig cfg;
    cfg.hidden1 = 3;
    cfg.hidden2 = 2;
    cfg.epochs = 50;
    const TrainOutput a = train(lg, 2, cfg);
    const TrainOutput b = train(lg, 2, cfg);
    CHECK(a.report.loss == b.report.loss);
    CHECK(a.model.theta1.data() == b.model.theta1.data());
}

TEST_CASE("training requires labelled line nodes") {
    const Hypergraph h = testutil::worked_fixture();
    LineGraph lg = build_line_graph(h);
    lg.features = derive_line_attributes(h, h.features);
    lg.labels.assign(static_cast<std::size_t>(lg.m), -1);
    TrainConfig cfg;
    CHECK_THROWS_AS(train(lg, 2, cfg), Error);
}

TEST_CASE("perturbing an isolated unlabelled line node leaves the loss unchanged") {
    // Two disjoint singleton-ish hyperedges: {0,1} and {2}; the latter is
    // isolated in the line graph and stays unlabelled.
    const Hypergraph h = build_hypergraph_indexed({"a", "b", "c"}, {{0, 1}, {2}}, Matrix(3, 2, 1.0),
                                                  LabelAssignment{});
    LineGraph lg = build_line_graph(h);
    lg.features = derive_line_attributes(h, h.features);
    lg.labels = {0, -1};

    const CsrMatrix anorm = normalize_adjacency(lg.adjacency);
    TrainConfig cfg;
    cfg.hidden1 = 2;
    cfg.hidden2 = 2;
    const GcnModel model = init_params(cfg, 2, 2);

    const double base =
        masked_cross_entropy(forward(model, anorm, lg.features).probs, lg.labels);
    Matrix perturbed = lg.features;
    perturbed(1, 0) += 17.0;
    perturbed(1, 1) -= 3.0;
    const double after =
        masked_cross_entropy(forward(model, anorm, perturbed).probs, lg.labels);
    CHECK(base == after);
}

TEST_CASE("a non-finite intermediate names the failing stage") {
    GcnModel model = tiny_model();
    model.theta1(0, 0) = 1e308;
    Matrix huge(1, 1, 1e308);  // overflow to infinity in the first product
    CHECK_THROWS_WITH_AS(forward(model, identity_anorm(1), huge), doctest::Contains("z1pre"),
                         Error);
}

TEST_CASE("no-head training works when hidden2 equals the class count") {
    const LineGraph lg = labelled_fixture_line_graph();
    TrainConfig cfg;
    cfg.hidden1 = 4;
    cfg.hidden2 = 2;
    cfg.use_head = false;
    cfg.epochs = 120;
    const TrainOutput out = train(lg, 2, cfg);
    CHECK(out.model.w_out.empty());
    CHECK(out.report.loss.back() < out.report.loss.front());
}

TEST_CASE("float32 training runs and roughly tracks float64") {
    const LineGraph lg = labelled_fixture_line_graph();
    TrainConfig cfg;
    cfg.hidden1 = 3;
    cfg.hidden2 = 2;
    cfg.epochs = 30;
    const TrainOutput f64 = train(lg, 2, cfg);
    cfg.float32 = true;
    const TrainOutput f32 = train(lg, 2, cfg);
    REQUIRE(f32.report.loss.size() == f64.report.loss.size());
    CHECK(f32.report.loss.front() == doctest::Approx(f64.report.loss.front()).epsilon(1e-4));
    CHECK(std::isfinite(f32.report.loss.back()));
}

TEST_CASE("dropout and weight decay stay deterministic and finite") {
    const LineGraph lg = labelled_fixture_line_graph();
    TrainConfig cfg;
    cfg.hidden1 = 3;
    cfg.hidden2 = 2;
    cfg.epochs = 40;
    cfg.dropout = 0.3;
    cfg.weight_decay = 1e-4;
    const TrainOutput a = train(lg, 2, cfg);
    const TrainOutput b = train(lg, 2, cfg);
    CHECK(a.report.loss == b.report.loss);
    CHECK(std::isfinite(a.report.loss.back()));
}
