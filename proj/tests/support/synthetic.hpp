#pragma once

// Seeded synthetic classification data for tests that need a dataset but
// not a particular one: Gaussian blobs, one cluster per class.

#include "nnrw/data.hpp"
#include "nnrw/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace synthetic {

inline nnrw::Dataset make_blobs(long samples_per_class, int n_features,
                                int n_classes, std::uint64_t seed,
                                double spread = 0.3) {
    nnrw::RandomStream rng(seed);
    nnrw::Matrix centers(n_classes, n_features);
    for (int c = 0; c < n_classes; ++c)
        for (int f = 0; f < n_features; ++f)
            centers(c, f) = rng.uniform(-2.0, 2.0);

    const long total = samples_per_class * n_classes;
    nnrw::Dataset ds;
    ds.name = "blobs";
    ds.features.resize(total, n_features);
    ds.labels.resize(static_cast<std::size_t>(total));
    for (long i = 0; i < total; ++i) {
        const int c = static_cast<int>(i % n_classes);
        for (int f = 0; f < n_features; ++f)
            ds.features(i, f) = centers(c, f) + rng.normal(0.0, spread);
        ds.labels[static_cast<std::size_t>(i)] = c;
    }
    ds.class_labels.resize(static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c)
        ds.class_labels[static_cast<std::size_t>(c)] = c;
    return ds;
}

// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 gen{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() /
                ("nnrw_test_" + std::to_string(gen()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const {
        return (path_ / name).string();
    }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

} // namespace synthetic
