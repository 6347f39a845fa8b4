#pragma once

#include "nnrw/pairing.hpp"
#include "nnrw/rng.hpp"
#include "nnrw/types.hpp"

#include <cstdint>
#include <vector>

namespace nnrw {

enum class Activation { Sigmoid };

// Sampling distribution for the random layer. Weights and biases are drawn
// from the same distribution.
struct Distribution {
    enum class Kind { UniformSymmetric, Normal };

    Kind kind = Kind::UniformSymmetric;
    double half_width = 1.0; // UniformSymmetric: range is [-half_width, half_width)
    double mean = 0.0;       // Normal
    double stddev = 1.0;     // Normal

    static Distribution uniform_symmetric(double half_width);
    static Distribution normal(double mean, double stddev);

    double sample(RandomStream& rng) const;
};

// Frozen random layer: row i of `weights` is the weight vector of unit i.
struct PrimaryLayer {
    Matrix weights; // p_units x n_features
    Vector biases;  // p_units
    Distribution distribution;
    std::uint64_t seed = 0;

    int p_units() const { return static_cast<int>(weights.rows()); }
    int n_features() const { return static_cast<int>(weights.cols()); }
};

struct ModelDesign {
    enum class Tag { Baseline, Efficient };

    Tag tag = Tag::Baseline;
    PairingPlan pairing; // Efficient only

    // Baseline: every unit is a hidden unit. Efficient: one hidden unit
    // per pair in the plan.
    int hidden_width(int p_units) const {
        return tag == Tag::Efficient ? pairing.size() : p_units;
    }
};

// Per-feature affine map fitted on training data: x' = (x - shift) * scale.
struct Normalization {
    Vector shift;
    Vector scale;

    Vector apply(const Vector& x) const;
};

// Immutable after training; concurrent read-only inference is safe.
struct TrainedModel {
    PrimaryLayer layer;
    ModelDesign design;
    Matrix beta; // hidden_width x n_classes; empty until trained
    std::vector<int> class_labels;
    Activation activation = Activation::Sigmoid;
    Normalization norm;

    int hidden_width() const { return design.hidden_width(layer.p_units()); }
    int n_classes() const { return static_cast<int>(class_labels.size()); }
    bool trained() const { return beta.size() > 0; }
};

// Draws a p_units x n_features weight matrix and a length-p_units bias
// vector from one seeded stream. Draw order is fixed (weights row-major,
// then biases) so identical arguments reproduce bit-identical layers.
PrimaryLayer init_primary_layer(int n_features, int p_units,
                                const Distribution& distribution,
                                std::uint64_t seed);

// 1 / (1 + exp(-z)), evaluated through exp(-|z|) so large |z| saturates
// instead of overflowing.
double sigmoid(double z);

double apply_activation(Activation act, double z);

// Pre-activation unit outputs: weights * x + biases. No activation.
Vector primary_outputs(const PrimaryLayer& layer, const Vector& x);

// For plan entry k = (i, j): out[k] = activation(p[i] + p[j]).
Vector secondary_outputs(const Vector& p, const PairingPlan& plan,
                         Activation act);

// Hidden-unit outputs for a raw input sample. Applies the model's
// normalization first. Baseline: activation(primary). Efficient:
// secondary_outputs over the plan.
Vector hidden_vector(const TrainedModel& model, const Vector& x);

// Per-class scores: hidden_vector(model, x) dotted with each beta column.
Vector predict_scores(const TrainedModel& model, const Vector& x);

// class_labels[argmax(scores)]; ties broken by lowest class index.
int predict_class(const TrainedModel& model, const Vector& x);

} // namespace nnrw
