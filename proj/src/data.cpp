#include "nnrw/data.hpp"

#include "nnrw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace nnrw {

namespace {

std::vector<std::string> split_fields(const std::string& line, Delimiter delim) {
    std::vector<std::string> fields;
    if (delim == Delimiter::Space) {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok)
            fields.push_back(tok);
        return fields;
    }
    const char sep = delim == Delimiter::Comma ? ',' : '\t';
    std::string tok;
    std::istringstream ss(line);
    while (std::getline(ss, tok, sep))
        fields.push_back(tok);
    return fields;
}

[[noreturn]] void fail(const std::string& path, long line_no, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
}

int parse_label(const std::string& tok, const std::string& path, long line_no) {
    if (tok.empty())
        fail(path, line_no, "empty label field");
    // Letter-style datasets label rows with a single letter.
    if (tok.size() == 1 && tok[0] >= 'A' && tok[0] <= 'Z')
        return tok[0] - 'A';
    if (tok.size() == 1 && tok[0] >= 'a' && tok[0] <= 'z')
        return tok[0] - 'a';
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        fail(path, line_no, "label '" + tok + "' is not an integer");
    }
    if (pos != tok.size())
        fail(path, line_no, "label '" + tok + "' is not an integer");
    return value;
}

double parse_feature(const std::string& tok, const std::string& path, long line_no,
                     std::size_t field) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(tok, &pos);
    } catch (const std::exception&) {
        fail(path, line_no,
             "field " + std::to_string(field + 1) + " '" + tok + "' is not a number");
    }
    if (pos != tok.size())
        fail(path, line_no,
             "field " + std::to_string(field + 1) + " '" + tok + "' is not a number");
    if (!std::isfinite(value))
        fail(path, line_no, "field " + std::to_string(field + 1) + " is not finite");
    return value;
}

} // namespace

Dataset load_delimited(const std::string& path, LabelColumn label_column,
                       Delimiter delimiter, const std::string& name) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::size_t n_fields = 0;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto fields = split_fields(line, delimiter);
        if (fields.empty())
            continue; // blank line
        if (n_fields == 0) {
            n_fields = fields.size();
            if (n_fields < 2)
                fail(path, line_no, "need at least one feature and a label");
        } else if (fields.size() != n_fields) {
            fail(path, line_no,
                 "expected " + std::to_string(n_fields) + " fields, got " +
                     std::to_string(fields.size()));
        }
        const std::size_t label_idx =
            label_column == LabelColumn::First ? 0 : n_fields - 1;
        labels.push_back(parse_label(fields[label_idx], path, line_no));
        std::vector<double> row;
        row.reserve(n_fields - 1);
        for (std::size_t f = 0; f < n_fields; ++f)
            if (f != label_idx)
                row.push_back(parse_feature(fields[f], path, line_no, f));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw DataError(path + ": no samples");

    Dataset ds;
    ds.name = name.empty() ? path : name;
    ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(n_fields - 1));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c + 1 < n_fields; ++c)
            ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c];
    ds.labels = std::move(labels);
    const std::set<int> distinct(ds.labels.begin(), ds.labels.end());
    ds.class_labels.assign(distinct.begin(), distinct.end());
    return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed) {
    const long L = dataset.sample_count();
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0, 1)");
    const long n_train = std::lround(static_cast<double>(L) * train_fraction);
    if (n_train < 1 || n_train > L - 1)
        throw std::invalid_argument("split: fraction " + std::to_string(train_fraction) +
                                    " leaves an empty part for " + std::to_string(L) +
                                    " samples");

    std::vector<long> perm(static_cast<std::size_t>(L));
    for (long i = 0; i < L; ++i)
        perm[static_cast<std::size_t>(i)] = i;
    RandomStream rng(seed);
    // Fisher-Yates; bounded draws come from RandomStream so the permutation
    // is identical on every standard library.
    for (long i = L - 1; i > 0; --i) {
        const auto j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }

    auto take = [&](long begin, long count, const char* suffix) {
        Dataset part;
        part.name = dataset.name + suffix;
        part.features.resize(count, dataset.features.cols());
        part.labels.resize(static_cast<std::size_t>(count));
        for (long r = 0; r < count; ++r) {
            const long src = perm[static_cast<std::size_t>(begin + r)];
            part.features.row(r) = dataset.features.row(src);
            part.labels[static_cast<std::size_t>(r)] =
                dataset.labels[static_cast<std::size_t>(src)];
        }
        // Keep the parent's label inventory: a part may miss a rare class
        // but must stay decodable against the same class set.
        part.class_labels = dataset.class_labels;
        return part;
    };
    return {take(0, n_train, "/train"), take(n_train, L - n_train, "/test")};
}

Dataset canonicalize_labels(const Dataset& dataset) {
    Dataset out = dataset;
    for (auto& label : out.labels) {
        const auto it = std::lower_bound(dataset.class_labels.begin(),
                                         dataset.class_labels.end(), label);
        label = static_cast<int>(it - dataset.class_labels.begin());
    }
    return out;
}

} // namespace nnrw
