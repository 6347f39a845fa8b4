#include "nnrw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nnrw {

namespace {

int thread_count() {
    if (const char* env = std::getenv("NNRW_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over disjoint row ranges. Each row is produced by
// exactly one invocation, so results cannot depend on the chunking. The
// first worker exception, if any, is rethrown on the calling thread.
void parallel_rows(long n_rows, const std::function<void(long, long)>& fn) {
    const long capped = std::min<long>(thread_count(), n_rows);
    const int n_threads = capped < 1 ? 1 : static_cast<int>(capped);
    if (n_threads <= 1) {
        fn(0, n_rows);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    std::exception_ptr error;
    std::mutex error_mutex;
    const long chunk = (n_rows + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
        const long begin = t * chunk;
        const long end = std::min(n_rows, begin + chunk);
        if (begin >= end)
            break;
        workers.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& w : workers)
        w.join();
    if (error)
        std::rethrow_exception(error);
}

// Ratio-of-diagonal estimate; cheap, order-of-magnitude only.
double diag_condition(const Vector& d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double v = std::abs(d(i));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo > 0.0))
        return std::numeric_limits<double>::infinity();
    return hi / lo;
}

int label_index(int label, const std::vector<int>& class_labels) {
    const auto it =
        std::lower_bound(class_labels.begin(), class_labels.end(), label);
    if (it == class_labels.end() || *it != label)
        throw DataError("label " + std::to_string(label) +
                        " is not in the class set");
    return static_cast<int>(it - class_labels.begin());
}

} // namespace

HiddenMatrix build_hidden_matrix(const TrainedModel& model, const Dataset& dataset) {
    const long L = dataset.sample_count();
    if (L < 1)
        throw std::invalid_argument("build_hidden_matrix: empty dataset");
    if (dataset.feature_count() != model.layer.n_features())
        throw ShapeError("build_hidden_matrix: dataset has " +
                         std::to_string(dataset.feature_count()) +
                         " features, model expects " +
                         std::to_string(model.layer.n_features()));

    const int m = model.hidden_width();
    HiddenMatrix h(L, m);
    parallel_rows(L, [&](long begin, long end) {
        for (long r = begin; r < end; ++r) {
            const Vector x = dataset.features.row(r).transpose();
            h.row(r) = hidden_vector(model, x).transpose();
        }
    });
    return h;
}

TargetMatrix one_hot_targets(const std::vector<int>& labels,
                             const std::vector<int>& class_labels) {
    TargetMatrix t = TargetMatrix::Zero(static_cast<Eigen::Index>(labels.size()),
                                        static_cast<Eigen::Index>(class_labels.size()));
    for (std::size_t l = 0; l < labels.size(); ++l)
        t(static_cast<Eigen::Index>(l), label_index(labels[l], class_labels)) = 1.0;
    return t;
}

OutputWeights ridge_solve(const HiddenMatrix& h, const TargetMatrix& t,
                          double lambda, SolveDiagnostics* diag) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("ridge_solve: lambda must be > 0 (use pinv_solve "
                                    "for the unregularized problem)");
    if (h.rows() != t.rows())
        throw ShapeError("ridge_solve: H has " + std::to_string(h.rows()) +
                         " rows, T has " + std::to_string(t.rows()));
    if (h.rows() < 1)
        throw std::invalid_argument("ridge_solve: empty system");
    if (!h.allFinite() || !t.allFinite())
        throw NumericError("ridge_solve: non-finite entries in H or T");

    const Eigen::Index m = h.cols();
    Matrix gram = Matrix::Zero(m, m);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(h.transpose());
    gram.diagonal().array() += lambda;
    const Matrix rhs = h.transpose() * t;

    OutputWeights out;
    out.lambda_used = lambda;
    out.method = SolveMethod::Ridge;

    Eigen::LLT<Matrix, Eigen::Lower> llt(gram);
    if (llt.info() == Eigen::Success) {
        out.values = llt.solve(rhs);
        if (diag) {
            diag->method = "ridge_llt";
            diag->spd_fallback = false;
            const double d = diag_condition(llt.matrixLLT().diagonal());
            diag->condition_estimate = d * d;
            diag->rank = m;
        }
        return out;
    }

    // Factorization failed; solve the (symmetric) normal equations with a
    // rank-revealing decomposition instead.
    const Matrix full = gram.selfadjointView<Eigen::Lower>();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(full);
    out.values = cod.solve(rhs);
    if (diag) {
        diag->method = "ridge_cod_fallback";
        diag->spd_fallback = true;
        diag->condition_estimate =
            diag_condition(cod.matrixQTZ().diagonal().head(cod.rank()));
        diag->rank = cod.rank();
    }
    if (!out.values.allFinite())
        throw NumericError("ridge_solve: fallback solve produced non-finite weights");
    return out;
}

OutputWeights pinv_solve(const HiddenMatrix& h, const TargetMatrix& t,
                         SolveDiagnostics* diag) {
    if (h.rows() != t.rows())
        throw ShapeError("pinv_solve: H has " + std::to_string(h.rows()) +
                         " rows, T has " + std::to_string(t.rows()));
    if (h.rows() < 1)
        throw std::invalid_argument("pinv_solve: empty system");
    if (!h.allFinite() || !t.allFinite())
        throw NumericError("pinv_solve: non-finite entries in H or T");

    Eigen::BDCSVD<Matrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericError("pinv_solve: SVD did not converge");
    // Rank cutoff: singular values below eps * max_sv * max(L, M) are noise.
    svd.setThreshold(std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(h.rows(), h.cols())));

    OutputWeights out;
    out.lambda_used = 0.0;
    out.method = SolveMethod::Pseudoinverse;
    out.values = svd.solve(t);
    if (diag) {
        diag->method = "pinv_svd";
        diag->spd_fallback = false;
        diag->rank = svd.rank();
        const auto& sv = svd.singularValues();
        const double smallest_kept =
            sv(std::max<Eigen::Index>(svd.rank() - 1, 0));
        diag->condition_estimate =
            smallest_kept > 0.0 ? sv(0) / smallest_kept
                                : std::numeric_limits<double>::infinity();
    }
    return out;
}

TrainedModel train(const ModelConfig& config, const Dataset& train_set,
                   SolveDiagnostics* diag) {
    if (train_set.class_count() < 2)
        throw std::invalid_argument("train: need at least 2 classes, got " +
                                    std::to_string(train_set.class_count()));
    const int n = train_set.feature_count();
    const long L = train_set.sample_count();

    TrainedModel model;
    model.activation = Activation::Sigmoid;
    model.class_labels = train_set.class_labels;
    model.design.tag = config.design;

    int p_units = 0;
    if (config.design == ModelDesign::Tag::Efficient) {
        model.design.pairing = build_pairing_plan(config.p_units, config.tau);
        p_units = config.p_units;
    } else {
        if (config.m_units < 1)
            throw std::invalid_argument("train: baseline m_units must be >= 1");
        p_units = config.m_units;
    }

    // Per-feature standardization fitted on the training data. Constant
    // features get scale 0, mapping them to exactly 0.
    model.norm.shift = train_set.features.colwise().mean().transpose();
    model.norm.scale.resize(n);
    for (int c = 0; c < n; ++c) {
        const double var =
            (train_set.features.col(c).array() - model.norm.shift(c)).square().sum() /
            static_cast<double>(L);
        model.norm.scale(c) = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    }

    model.layer = init_primary_layer(n, p_units, config.distribution, config.seed);

    const HiddenMatrix h = build_hidden_matrix(model, train_set);
    const TargetMatrix t = one_hot_targets(train_set.labels, train_set.class_labels);

    OutputWeights weights;
    if (config.solver == SolveMethod::Ridge)
        weights = ridge_solve(h, t, config.lambda, diag);
    else
        weights = pinv_solve(h, t, diag);
    model.beta = std::move(weights.values);
    return model;
}

double accuracy_percent(const TrainedModel& model, const Dataset& dataset) {
    if (!model.trained())
        throw StateError("accuracy_percent: model has no output weights");
    const HiddenMatrix h = build_hidden_matrix(model, dataset);
    const Matrix scores = h * model.beta;
    long correct = 0;
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < scores.cols(); ++c)
            if (scores(r, c) > scores(r, best))
                best = c;
        if (model.class_labels[static_cast<std::size_t>(best)] ==
            dataset.labels[static_cast<std::size_t>(r)])
            ++correct;
    }
    return 100.0 * static_cast<double>(correct) /
           static_cast<double>(dataset.sample_count());
}

} // namespace nnrw
