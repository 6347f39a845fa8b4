#include "nnrw/model.hpp"
#include "nnrw/pairing.hpp"
#include "nnrw/solver.hpp"

#include "support/matchers.hpp"
#include "support/properties.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace nnrw;

namespace {

// Hand-assembled baseline model (no normalization) for forward-path tests.
TrainedModel make_baseline_model(const Matrix& weights, const Vector& biases,
                                 const Matrix& beta, std::vector<int> labels) {
    TrainedModel model;
    model.layer.weights = weights;
    model.layer.biases = biases;
    model.design.tag = ModelDesign::Tag::Baseline;
    model.beta = beta;
    model.class_labels = std::move(labels);
    return model;
}

} // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("layer init is reproducible from the seed") {
    const Distribution dist = Distribution::uniform_symmetric(1.0);
    const PrimaryLayer a = init_primary_layer(2, 3, dist, 7);
    const PrimaryLayer b = init_primary_layer(2, 3, dist, 7);
    CHECK(testutil::exact_equal(a.weights, b.weights));
    CHECK(testutil::exact_equal(a.biases, b.biases));
    const PrimaryLayer c = init_primary_layer(2, 3, dist, 8);
    CHECK_FALSE(testutil::exact_equal(a.weights, c.weights));
}

TEST_CASE("layer init shape and uniform range") {
    const PrimaryLayer layer =
        init_primary_layer(36, 90, Distribution::uniform_symmetric(1.0), 1234);
    CHECK(layer.weights.rows() == 90);
    CHECK(layer.weights.cols() == 36);
    CHECK(layer.biases.size() == 90);
    CHECK(layer.weights.minCoeff() >= -1.0);
    CHECK(layer.weights.maxCoeff() <= 1.0);
    CHECK(layer.biases.minCoeff() >= -1.0);
    CHECK(layer.biases.maxCoeff() <= 1.0);
}

TEST_CASE("normal layer matches its moments at large sample size") {
    const PrimaryLayer layer =
        init_primary_layer(2, 10000, Distribution::normal(0.0, 1.0), 99);
    const double n = static_cast<double>(layer.weights.size());
    const double mean = layer.weights.sum() / n;
    const double var = (layer.weights.array() - mean).square().sum() / n;
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("layer init rejects bad arguments") {
    const Distribution dist = Distribution::uniform_symmetric(1.0);
    CHECK_THROWS_AS(init_primary_layer(0, 3, dist, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_primary_layer(3, 0, dist, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_primary_layer(-1, 3, dist, 1), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::uniform_symmetric(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::uniform_symmetric(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::uniform_symmetric(
                        std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(Distribution::normal(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::normal(
                        std::numeric_limits<double>::infinity(), 1.0),
                    std::invalid_argument);
    Distribution bad;
    bad.half_width = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(init_primary_layer(2, 2, bad, 1), std::invalid_argument);
}

TEST_CASE("sigmoid values") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(5.0) == doctest::Approx(0.99330714907571527).epsilon(1e-14));
    for (const double z : {0.5, 2.0, 17.0, 123.0})
        CHECK(sigmoid(z) + sigmoid(-z) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sigmoid saturates without overflow") {
    CHECK(sigmoid(1e3) == 1.0);
    CHECK(sigmoid(-1e3) == 0.0);
    CHECK(std::isfinite(sigmoid(708.0)));
    CHECK(std::isfinite(sigmoid(-708.0)));
    RandomStream rng(5);
    double prev_z = -1e3, prev_g = sigmoid(-1e3);
    std::vector<double> zs;
    for (int i = 0; i < 200; ++i)
        zs.push_back(rng.uniform(-1e3, 1e3));
    std::sort(zs.begin(), zs.end());
    for (const double z : zs) {
        const double g = sigmoid(z);
        CHECK(g >= prev_g); // monotone
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
        prev_z = z;
        prev_g = g;
    }
    (void)prev_z;
}

TEST_CASE("primary outputs") {
    PrimaryLayer layer;
    layer.weights = Matrix::Identity(2, 2);
    layer.biases = Vector::Zero(2);

    SUBCASE("identity map") {
        Vector x(2);
        x << 3.0, -1.0;
        const Vector p = primary_outputs(layer, x);
        CHECK(p(0) == 3.0);
        CHECK(p(1) == -1.0);
    }
    SUBCASE("hand arithmetic") {
        PrimaryLayer one;
        one.weights = Matrix(1, 2);
        one.weights << 1.0, 2.0;
        one.biases = Vector::Constant(1, 0.5);
        Vector x(2);
        x << 2.0, 3.0;
        CHECK(primary_outputs(one, x)(0) == 8.5);
    }
    SUBCASE("zero input returns the biases") {
        layer.biases << 0.25, -0.75;
        const Vector p = primary_outputs(layer, Vector::Zero(2));
        CHECK(p(0) == 0.25);
        CHECK(p(1) == -0.75);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(primary_outputs(layer, Vector::Zero(3)), ShapeError);
    }
}

TEST_CASE("secondary outputs") {
    PairingPlan plan;
    plan.p_units = 2;
    plan.tau = 1;
    plan.pairs = {{0, 1}};
    Vector p(2);
    p << 2.0, 3.0;

    SUBCASE("single pair") {
        const Vector s = secondary_outputs(p, plan, Activation::Sigmoid);
        CHECK(s.size() == 1);
        CHECK(s(0) == doctest::Approx(0.99330714907571527).epsilon(1e-14));
    }
    SUBCASE("empty plan gives an empty vector") {
        PairingPlan empty;
        empty.p_units = 2;
        empty.tau = 1;
        CHECK(secondary_outputs(p, empty, Activation::Sigmoid).size() == 0);
    }
    SUBCASE("out-of-range index") {
        PairingPlan bad;
        bad.p_units = 3;
        bad.tau = 1;
        bad.pairs = {{0, 2}};
        CHECK_THROWS_AS(secondary_outputs(p, bad, Activation::Sigmoid), IndexError);
    }
}

TEST_CASE("paired units equal merged-weight units") {
    const auto result = props::merged_identity_check(1000, 42);
    CHECK(result.instances == 1000);
    CHECK(result.max_rel_error < 1e-12);
}

TEST_CASE("hidden vector, baseline") {
    TrainedModel model = make_baseline_model(Matrix::Identity(3, 3),
                                             Vector::Zero(3), Matrix(), {});
    const Vector h = hidden_vector(model, Vector::Zero(3));
    CHECK(h.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(h(i) == 0.5);
}

TEST_CASE("hidden vector, paired design width") {
    TrainedModel model;
    model.layer = init_primary_layer(2, 4, Distribution::uniform_symmetric(1.0), 3);
    model.design.tag = ModelDesign::Tag::Efficient;
    model.design.pairing = build_pairing_plan(4, 1);
    Vector x(2);
    x << 0.3, -0.2;
    const Vector h = hidden_vector(model, x);
    CHECK(h.size() == 6);
    CHECK(model.hidden_width() == 6);

    // Purity: identical calls give identical bits.
    const Vector h2 = hidden_vector(model, x);
    CHECK(testutil::exact_equal(h, h2));
}

TEST_CASE("pairing against zero partners reproduces the baseline exactly") {
    RandomStream rng(77);
    for (int iter = 0; iter < 20; ++iter) {
        const int n = 1 + static_cast<int>(rng.next_below(6));
        const int p = 1 + static_cast<int>(rng.next_below(8));
        const PrimaryLayer active =
            init_primary_layer(n, p, Distribution::uniform_symmetric(1.0),
                               splitmix64(iter));

        // Double the layer with zero-weight, zero-bias partner units.
        TrainedModel padded;
        padded.layer.weights = Matrix::Zero(2 * p, n);
        padded.layer.weights.topRows(p) = active.weights;
        padded.layer.biases = Vector::Zero(2 * p);
        padded.layer.biases.head(p) = active.biases;
        padded.design.tag = ModelDesign::Tag::Efficient;
        padded.design.pairing.p_units = 2 * p;
        padded.design.pairing.tau = p; // every difference is exactly p
        for (int i = 0; i < p; ++i)
            padded.design.pairing.pairs.emplace_back(i, p + i);

        TrainedModel baseline;
        baseline.layer = active;
        baseline.design.tag = ModelDesign::Tag::Baseline;

        Vector x(n);
        for (int f = 0; f < n; ++f)
            x(f) = rng.uniform(-2.0, 2.0);
        CHECK(testutil::exact_equal(hidden_vector(padded, x),
                                    hidden_vector(baseline, x)));
    }
}

TEST_CASE("merged normal weights keep normal moments") {
    const auto check = props::merged_normal_moments(100000, 0.3, 0.7, 2024);
    INFO("mean ", check.mean, " vs ", check.mean_target, " +/- ", check.mean_tol);
    INFO("var ", check.variance, " vs ", check.var_target, " +/- ", check.var_tol);
    CHECK(check.samples >= 100000);
    CHECK(check.pass);
}

TEST_CASE("merged uniform weights thin out at the extremes") {
    const auto check = props::merged_uniform_shape(100000, 1.0, 515);
    INFO("center ", check.center_count, " edge ", check.edge_count);
    CHECK(check.samples >= 100000);
    CHECK(check.pass);
}

TEST_CASE("predict scores") {
    SUBCASE("zero beta gives zero scores") {
        TrainedModel model = make_baseline_model(
            Matrix::Identity(2, 2), Vector::Zero(2), Matrix::Zero(2, 3), {0, 1, 2});
        const Vector scores = predict_scores(model, Vector::Ones(2));
        CHECK(scores.size() == 3);
        CHECK(scores.norm() == 0.0);
    }
    SUBCASE("scalar product") {
        // One hidden unit: score c = h0 * beta(0, c).
        Matrix w(1, 1);
        w << 1.0;
        Matrix beta(1, 2);
        beta << 0.5, -1.0;
        TrainedModel model =
            make_baseline_model(w, Vector::Zero(1), beta, {0, 1});
        Vector x(1);
        x << 0.4;
        const double h0 = sigmoid(0.4);
        const Vector scores = predict_scores(model, x);
        CHECK(scores(0) == h0 * 0.5);
        CHECK(scores(1) == h0 * -1.0);
    }
    SUBCASE("untrained model") {
        TrainedModel model =
            make_baseline_model(Matrix::Identity(2, 2), Vector::Zero(2), Matrix(), {0, 1});
        CHECK_THROWS_AS(predict_scores(model, Vector::Ones(2)), StateError);
    }
}

TEST_CASE("batch and per-sample score paths agree") {
    const Dataset data = synthetic::make_blobs(40, 5, 3, 11);
    ModelConfig config;
    config.design = ModelDesign::Tag::Efficient;
    config.p_units = 8;
    config.tau = 2;
    config.seed = 4;
    const TrainedModel model = train(config, data);

    const HiddenMatrix h = build_hidden_matrix(model, data);
    const Matrix batch_scores = h * model.beta;
    for (long r = 0; r < data.sample_count(); ++r) {
        const Vector per_sample =
            predict_scores(model, data.features.row(r).transpose());
        const double diff =
            (batch_scores.row(r).transpose() - per_sample).cwiseAbs().maxCoeff();
        REQUIRE(diff < 1e-10);
    }
}

TEST_CASE("predict_class decodes argmax with low-index ties") {
    // One hidden unit, beta tuned to produce chosen scores.
    Matrix w(1, 1);
    w << 1.0;
    Vector x(1);
    x << 0.0; // h0 = 0.5 exactly

    SUBCASE("plain argmax") {
        Matrix beta(1, 3);
        beta << 0.2, 1.8, 0.6; // scores 0.1, 0.9, 0.3
        TrainedModel model = make_baseline_model(w, Vector::Zero(1), beta, {1, 2, 3});
        CHECK(predict_class(model, x) == 2);
    }
    SUBCASE("tie goes to the lower class index") {
        Matrix beta(1, 2);
        beta << 1.0, 1.0; // both scores exactly 0.5
        TrainedModel model = make_baseline_model(w, Vector::Zero(1), beta, {1, 2});
        CHECK(predict_class(model, x) == 1);
    }
}

TEST_CASE("prediction is always a member of the class set") {
    const Dataset data = synthetic::make_blobs(30, 4, 4, 21);
    ModelConfig config;
    config.design = ModelDesign::Tag::Baseline;
    config.m_units = 20;
    config.seed = 9;
    const TrainedModel model = train(config, data);

    RandomStream rng(13);
    for (int i = 0; i < 500; ++i) {
        Vector x(4);
        for (int f = 0; f < 4; ++f)
            x(f) = rng.uniform(-50.0, 50.0);
        const int label = predict_class(model, x);
        CHECK(std::find(model.class_labels.begin(), model.class_labels.end(), label) !=
              model.class_labels.end());
    }
}

TEST_CASE("single-sample training set interpolates to its own label") {
    // A one-sample train part still carries the parent's two-class inventory.
    Dataset two;
    two.name = "two";
    two.features = Matrix(2, 2);
    two.features << 0.0, 1.0, 1.0, 0.0;
    two.labels = {5, 9};
    two.class_labels = {5, 9};
    const auto [one, rest] = split(two, 0.5, 3);
    REQUIRE(one.sample_count() == 1);
    REQUIRE(one.class_count() == 2);

    ModelConfig config;
    config.design = ModelDesign::Tag::Baseline;
    config.m_units = 4;
    config.seed = 17;
    config.solver = SolveMethod::Pseudoinverse;
    const TrainedModel model = train(config, one);
    CHECK(predict_class(model, one.features.row(0).transpose()) == one.labels[0]);
}

TEST_SUITE_END();
