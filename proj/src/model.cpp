#include "nnrw/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nnrw {

Distribution Distribution::uniform_symmetric(double half_width) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument(
            "Distribution: half_width must be finite and > 0");
    Distribution d;
    d.kind = Kind::UniformSymmetric;
    d.half_width = half_width;
    return d;
}

Distribution Distribution::normal(double mean, double stddev) {
    if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0))
        throw std::invalid_argument(
            "Distribution: mean must be finite and stddev finite and > 0");
    Distribution d;
    d.kind = Kind::Normal;
    d.mean = mean;
    d.stddev = stddev;
    return d;
}

double Distribution::sample(RandomStream& rng) const {
    switch (kind) {
    case Kind::UniformSymmetric:
        return rng.uniform(-half_width, half_width);
    case Kind::Normal:
        return rng.normal(mean, stddev);
    }
    throw std::logic_error("Distribution: unknown kind");
}

Vector Normalization::apply(const Vector& x) const {
    if (shift.size() == 0)
        return x;
    if (x.size() != shift.size())
        throw ShapeError("Normalization: expected " +
                         std::to_string(shift.size()) + " features, got " +
                         std::to_string(x.size()));
    return (x - shift).cwiseProduct(scale);
}

PrimaryLayer init_primary_layer(int n_features, int p_units,
                                const Distribution& distribution,
                                std::uint64_t seed) {
    if (n_features < 1)
        throw std::invalid_argument("init_primary_layer: n_features must be >= 1, got " +
                                    std::to_string(n_features));
    if (p_units < 1)
        throw std::invalid_argument("init_primary_layer: p_units must be >= 1, got " +
                                    std::to_string(p_units));
    // Re-validate parameters so layers can't be built from a default-initialized
    // struct holding non-finite values.
    if (distribution.kind == Distribution::Kind::UniformSymmetric) {
        if (!(distribution.half_width > 0.0) || !std::isfinite(distribution.half_width))
            throw std::invalid_argument("init_primary_layer: half_width must be finite and > 0");
    } else {
        if (!std::isfinite(distribution.mean) || !std::isfinite(distribution.stddev) ||
            !(distribution.stddev > 0.0))
            throw std::invalid_argument("init_primary_layer: invalid normal parameters");
    }

    PrimaryLayer layer;
    layer.distribution = distribution;
    layer.seed = seed;
    layer.weights.resize(p_units, n_features);
    layer.biases.resize(p_units);

    RandomStream rng(seed);
    for (int i = 0; i < p_units; ++i)
        for (int j = 0; j < n_features; ++j)
            layer.weights(i, j) = distribution.sample(rng);
    for (int i = 0; i < p_units; ++i)
        layer.biases(i) = distribution.sample(rng);
    return layer;
}

double sigmoid(double z) {
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double apply_activation(Activation act, double z) {
    switch (act) {
    case Activation::Sigmoid:
        return sigmoid(z);
    }
    throw std::logic_error("apply_activation: unknown activation");
}

Vector primary_outputs(const PrimaryLayer& layer, const Vector& x) {
    if (x.size() != layer.n_features())
        throw ShapeError("primary_outputs: input has " + std::to_string(x.size()) +
                         " features, layer expects " +
                         std::to_string(layer.n_features()));
    return layer.weights * x + layer.biases;
}

Vector secondary_outputs(const Vector& p, const PairingPlan& plan,
                         Activation act) {
    Vector out(plan.pairs.size());
    const int n = static_cast<int>(p.size());
    for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
        const auto [i, j] = plan.pairs[k];
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw IndexError("secondary_outputs: pair (" + std::to_string(i) +
                             ", " + std::to_string(j) + ") out of range for " +
                             std::to_string(n) + " primary units");
        out(static_cast<Eigen::Index>(k)) = apply_activation(act, p(i) + p(j));
    }
    return out;
}

Vector hidden_vector(const TrainedModel& model, const Vector& x) {
    const Vector xn = model.norm.apply(x);
    const Vector p = primary_outputs(model.layer, xn);
    if (model.design.tag == ModelDesign::Tag::Efficient)
        return secondary_outputs(p, model.design.pairing, model.activation);
    Vector out(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i)
        out(i) = apply_activation(model.activation, p(i));
    return out;
}

Vector predict_scores(const TrainedModel& model, const Vector& x) {
    if (!model.trained())
        throw StateError("predict_scores: model has no output weights");
    const Vector h = hidden_vector(model, x);
    if (h.size() != model.beta.rows())
        throw ShapeError("predict_scores: hidden width " + std::to_string(h.size()) +
                         " does not match beta rows " +
                         std::to_string(model.beta.rows()));
    return model.beta.transpose() * h;
}

int predict_class(const TrainedModel& model, const Vector& x) {
    const Vector scores = predict_scores(model, x);
    if (scores.size() == 0)
        throw StateError("predict_class: model has no classes");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i)
        if (scores(i) > scores(best))
            best = i;
    return model.class_labels[static_cast<std::size_t>(best)];
}

} // namespace nnrw
