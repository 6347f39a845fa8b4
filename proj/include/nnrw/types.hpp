#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace nnrw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Hidden-output matrix H (rows = samples, cols = hidden units) and one-hot
// target matrix T (rows = samples, cols = classes).
using HiddenMatrix = Matrix;
using TargetMatrix = Matrix;

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Malformed or inconsistent input data (files, labels, schema).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values or failed factorizations.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation requires state the object does not have (e.g. untrained model).
struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nnrw
