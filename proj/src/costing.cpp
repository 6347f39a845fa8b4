#include "nnrw/costing.hpp"

#include <stdexcept>
#include <vector>

namespace nnrw {

std::int64_t efficient_macs(int n_features, int p_units, int hidden_width,
                            int n_classes) {
    if (n_features < 1 || p_units < 1 || hidden_width < 1 || n_classes < 1)
        throw std::invalid_argument("efficient_macs: all dimensions must be >= 1");
    return static_cast<std::int64_t>(n_features) * p_units +
           static_cast<std::int64_t>(hidden_width) * n_classes;
}

std::int64_t baseline_macs(int n_features, int hidden_width, int n_classes) {
    if (n_features < 1 || hidden_width < 1 || n_classes < 1)
        throw std::invalid_argument("baseline_macs: all dimensions must be >= 1");
    return (static_cast<std::int64_t>(n_features) + n_classes) * hidden_width;
}

double reduction_percent(std::int64_t efficient, std::int64_t baseline) {
    if (baseline <= 0)
        throw std::invalid_argument("reduction_percent: baseline must be > 0");
    return 100.0 * (1.0 - static_cast<double>(efficient) /
                              static_cast<double>(baseline));
}

int truncated_percent(double percent) {
    return static_cast<int>(percent);
}

CostReport cost_report(int n_features, int p_units, int hidden_width,
                       int n_classes) {
    CostReport r;
    r.n_features = n_features;
    r.p_units = p_units;
    r.hidden_width = hidden_width;
    r.n_classes = n_classes;
    r.efficient_macs = efficient_macs(n_features, p_units, hidden_width, n_classes);
    r.baseline_macs = baseline_macs(n_features, hidden_width, n_classes);
    r.reduction_percent = reduction_percent(r.efficient_macs, r.baseline_macs);
    return r;
}

std::int64_t measured_forward_macs(const TrainedModel& model, const Vector& x) {
    if (!model.trained())
        throw StateError("measured_forward_macs: model has no output weights");
    if (x.size() != model.layer.n_features())
        throw ShapeError("measured_forward_macs: input width mismatch");

    std::int64_t macs = 0;
    const int p_units = model.layer.p_units();
    const int n = model.layer.n_features();

    std::vector<double> primary(static_cast<std::size_t>(p_units));
    for (int i = 0; i < p_units; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            acc += model.layer.weights(i, j) * x(j);
            ++macs;
        }
        primary[static_cast<std::size_t>(i)] = acc + model.layer.biases(i); // bias add: not a MAC
    }

    std::vector<double> hidden;
    if (model.design.tag == ModelDesign::Tag::Efficient) {
        hidden.reserve(model.design.pairing.pairs.size());
        for (const auto& [i, j] : model.design.pairing.pairs)
            hidden.push_back(apply_activation(
                model.activation,
                primary[static_cast<std::size_t>(i)] +
                    primary[static_cast<std::size_t>(j)])); // pair sum: not a MAC
    } else {
        hidden.reserve(primary.size());
        for (const double p : primary)
            hidden.push_back(apply_activation(model.activation, p));
    }

    const int q = model.n_classes();
    const int m = static_cast<int>(hidden.size());
    for (int c = 0; c < q; ++c) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k) {
            acc += hidden[static_cast<std::size_t>(k)] * model.beta(k, c);
            ++macs;
        }
        (void)acc;
    }
    return macs;
}

} // namespace nnrw
