#pragma once

#include "nnrw/data.hpp"
#include "nnrw/model.hpp"
#include "nnrw/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nnrw {

enum class SolveMethod { Ridge, Pseudoinverse };

// Tunable hidden-to-output weights, one column per class.
struct OutputWeights {
    Matrix values; // hidden_width x n_classes
    double lambda_used = 0.0;
    SolveMethod method = SolveMethod::Ridge;
};

// Machine-readable solve diagnostics, emitted by the CLI as key=value lines.
struct SolveDiagnostics {
    std::string method;
    bool spd_fallback = false;       // SPD factorization failed, rank-revealing used
    double condition_estimate = 0.0; // cheap estimate from factor diagonals
    long rank = -1;                  // pseudoinverse / fallback path only
};

// L x M matrix whose row l is hidden_vector(model, sample l). Rows are
// computed in parallel (NNRW_THREADS overrides the thread count); the result
// is identical for any thread count.
HiddenMatrix build_hidden_matrix(const TrainedModel& model, const Dataset& dataset);

// Row l is all zeros except a 1 at the position of labels[l] in
// class_labels. class_labels must be sorted ascending.
TargetMatrix one_hot_targets(const std::vector<int>& labels,
                             const std::vector<int>& class_labels);

// Minimizes |H b - T|_F^2 + lambda |b|_F^2 through the normal equations:
// (H'H + lambda I) b = H'T, factored as SPD. Falls back to a rank-revealing
// decomposition if the factorization reports trouble.
OutputWeights ridge_solve(const HiddenMatrix& h, const TargetMatrix& t,
                          double lambda, SolveDiagnostics* diag = nullptr);

// Minimum-norm least-squares solution via SVD. Singular values below
// eps * max_sv * max(L, M) are treated as zero.
OutputWeights pinv_solve(const HiddenMatrix& h, const TargetMatrix& t,
                         SolveDiagnostics* diag = nullptr);

struct ModelConfig {
    ModelDesign::Tag design = ModelDesign::Tag::Baseline;
    int p_units = 0; // Efficient: primary unit count
    int tau = 0;     // Efficient: pairing stride
    int m_units = 0; // Baseline: hidden unit count
    Distribution distribution = Distribution{};
    std::uint64_t seed = 0;
    double lambda = 0.01;
    SolveMethod solver = SolveMethod::Ridge;
};

// Full training pipeline: fit per-feature normalization on train_set, draw
// the random layer, build the pairing plan (Efficient), assemble H and T,
// solve for beta. The returned model is immutable.
TrainedModel train(const ModelConfig& config, const Dataset& train_set,
                   SolveDiagnostics* diag = nullptr);

// Fraction of correctly classified samples, in percent [0, 100].
// Predictions use the batch path (hidden matrix times beta).
double accuracy_percent(const TrainedModel& model, const Dataset& dataset);

} // namespace nnrw
