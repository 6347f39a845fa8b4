#pragma once

#include "nnrw/model.hpp"
#include "nnrw/types.hpp"

#include <cstdint>

namespace nnrw {

struct CostReport {
    int n_features = 0;
    int p_units = 0;
    int hidden_width = 0;
    int n_classes = 0;
    std::int64_t efficient_macs = 0;
    std::int64_t baseline_macs = 0;
    double reduction_percent = 0.0; // raw; display truncates toward zero
};

// Inference multiply-accumulates for the paired design: N*P into the
// primary units plus M*Q into the outputs. Bias adds, the pairwise unit
// sums, and activations are not MACs and are not counted.
std::int64_t efficient_macs(int n_features, int p_units, int hidden_width,
                            int n_classes);

// Inference MACs for the one-weight-vector-per-hidden-unit design, where
// the primary count equals the hidden width: (N + Q) * M.
std::int64_t baseline_macs(int n_features, int hidden_width, int n_classes);

// 100 * (1 - efficient / baseline).
double reduction_percent(std::int64_t efficient, std::int64_t baseline);

// Integer percent, truncated toward zero.
int truncated_percent(double percent);

CostReport cost_report(int n_features, int p_units, int hidden_width,
                       int n_classes);

// Runs a plain-loop forward pass on x and counts every multiply-accumulate
// actually executed (bias adds, pair sums, and activations excluded). Used
// to confirm the closed-form counts against the real computation.
std::int64_t measured_forward_macs(const TrainedModel& model, const Vector& x);

} // namespace nnrw
