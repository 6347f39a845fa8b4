#pragma once

#include "nnrw/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nnrw {

// Immutable after load. `labels` holds the values as loaded; `class_labels`
// is the sorted distinct set they come from (original values, kept for
// decoding even after canonicalize_labels remaps `labels` to 0..Q-1).
struct Dataset {
    Matrix features; // L x N
    std::vector<int> labels;
    std::vector<int> class_labels;
    std::string name;

    long sample_count() const { return static_cast<long>(features.rows()); }
    int feature_count() const { return static_cast<int>(features.cols()); }
    int class_count() const { return static_cast<int>(class_labels.size()); }
};

enum class LabelColumn { First, Last };
enum class Delimiter { Comma, Space, Tab };

// Loads a delimiter-separated text file, one sample per line. Every row
// must have the same field count; the label field must be an integer or a
// single letter A-Z / a-z (mapped to 0..25); feature fields must parse as
// reals. Space delimiting treats any run of blanks as one separator.
// Errors carry the offending 1-based line number.
Dataset load_delimited(const std::string& path, LabelColumn label_column,
                       Delimiter delimiter, const std::string& name = "");

// Seeded uniform shuffle, then the first round(L * train_fraction) samples
// form the train part and the rest the test part. Both parts must end up
// non-empty.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

// Remaps labels to 0..Q-1 by sorted order of the original values; the
// original values stay in class_labels.
Dataset canonicalize_labels(const Dataset& dataset);

} // namespace nnrw
