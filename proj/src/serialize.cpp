#include "nnrw/serialize.hpp"

#include "nnrw/pairing.hpp"
#include "nnrw/types.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace nnrw {

namespace {

constexpr const char* kSchema = "nnrw/1";

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_reals(std::ostream& os, const char* key, const double* data,
                 Eigen::Index count) {
    os << key;
    for (Eigen::Index i = 0; i < count; ++i)
        os << ' ' << fmt_real(data[i]);
    os << '\n';
}

class TokenReader {
public:
    explicit TokenReader(const std::string& text) : ss_(text) {}

    std::string word(const char* what) {
        std::string tok;
        if (!(ss_ >> tok))
            throw DataError(std::string("model file: missing ") + what);
        return tok;
    }

    void expect(const char* keyword) {
        const std::string tok = word(keyword);
        if (tok != keyword)
            throw DataError("model file: expected '" + std::string(keyword) +
                            "', found '" + tok + "'");
    }

    template <typename T>
    T number(const char* what) {
        T v{};
        if (!(ss_ >> v))
            throw DataError(std::string("model file: bad value for ") + what);
        return v;
    }

    void read_reals(const char* key, double* out, Eigen::Index count) {
        expect(key);
        for (Eigen::Index i = 0; i < count; ++i)
            out[i] = number<double>(key);
    }

private:
    std::istringstream ss_;
};

} // namespace

std::string model_to_string(const TrainedModel& model) {
    if (!model.trained())
        throw StateError("model_to_string: model has no output weights");
    if (!model.beta.allFinite() || !model.layer.weights.allFinite() ||
        !model.layer.biases.allFinite())
        throw NumericError("model_to_string: non-finite model parameters");

    const bool efficient = model.design.tag == ModelDesign::Tag::Efficient;
    const int p = model.layer.p_units();
    const int n = model.layer.n_features();
    const int m = model.hidden_width();
    const int q = model.n_classes();

    std::ostringstream os;
    os << kSchema << '\n';
    os << "design " << (efficient ? "efficient" : "baseline") << '\n';
    os << "n_features " << n << '\n';
    os << "p_units " << p << '\n';
    os << "tau " << (efficient ? model.design.pairing.tau : 0) << '\n';
    os << "hidden_width " << m << '\n';
    os << "n_classes " << q << '\n';
    if (model.layer.distribution.kind == Distribution::Kind::UniformSymmetric)
        os << "distribution uniform_symmetric "
           << fmt_real(model.layer.distribution.half_width) << '\n';
    else
        os << "distribution normal " << fmt_real(model.layer.distribution.mean)
           << ' ' << fmt_real(model.layer.distribution.stddev) << '\n';
    os << "seed " << model.layer.seed << '\n';
    os << "activation sigmoid\n";
    os << "index_base 0\n";
    os << "class_labels";
    for (const int label : model.class_labels)
        os << ' ' << label;
    os << '\n';
    write_reals(os, "norm_shift", model.norm.shift.data(), model.norm.shift.size());
    write_reals(os, "norm_scale", model.norm.scale.data(), model.norm.scale.size());
    // Matrices are stored row-major regardless of in-memory layout.
    os << "weights";
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j)
            os << ' ' << fmt_real(model.layer.weights(i, j));
    os << '\n';
    write_reals(os, "biases", model.layer.biases.data(), model.layer.biases.size());
    os << "beta";
    for (int k = 0; k < m; ++k)
        for (int c = 0; c < q; ++c)
            os << ' ' << fmt_real(model.beta(k, c));
    os << '\n';
    os << "end\n";
    return os.str();
}

TrainedModel model_from_string(const std::string& text) {
    TokenReader in(text);

    const std::string schema = in.word("schema version");
    if (schema != kSchema)
        throw DataError("model file: unsupported schema '" + schema + "'");

    TrainedModel model;
    in.expect("design");
    const std::string design = in.word("design tag");
    if (design == "efficient")
        model.design.tag = ModelDesign::Tag::Efficient;
    else if (design == "baseline")
        model.design.tag = ModelDesign::Tag::Baseline;
    else
        throw DataError("model file: unknown design '" + design + "'");

    in.expect("n_features");
    const int n = in.number<int>("n_features");
    in.expect("p_units");
    const int p = in.number<int>("p_units");
    in.expect("tau");
    const int tau = in.number<int>("tau");
    in.expect("hidden_width");
    const int m = in.number<int>("hidden_width");
    in.expect("n_classes");
    const int q = in.number<int>("n_classes");
    if (n < 1 || p < 1 || m < 1 || q < 1)
        throw DataError("model file: non-positive dimensions");

    in.expect("distribution");
    const std::string kind = in.word("distribution kind");
    if (kind == "uniform_symmetric") {
        model.layer.distribution =
            Distribution::uniform_symmetric(in.number<double>("half_width"));
    } else if (kind == "normal") {
        const double mean = in.number<double>("mean");
        const double stddev = in.number<double>("stddev");
        model.layer.distribution = Distribution::normal(mean, stddev);
    } else {
        throw DataError("model file: unknown distribution '" + kind + "'");
    }

    in.expect("seed");
    model.layer.seed = in.number<std::uint64_t>("seed");
    in.expect("activation");
    const std::string act = in.word("activation");
    if (act != "sigmoid")
        throw DataError("model file: unknown activation '" + act + "'");
    model.activation = Activation::Sigmoid;
    in.expect("index_base");
    if (in.number<int>("index_base") != 0)
        throw DataError("model file: only 0-based unit indexing is supported");

    in.expect("class_labels");
    model.class_labels.resize(static_cast<std::size_t>(q));
    for (int c = 0; c < q; ++c)
        model.class_labels[static_cast<std::size_t>(c)] = in.number<int>("class label");

    model.norm.shift.resize(n);
    model.norm.scale.resize(n);
    in.read_reals("norm_shift", model.norm.shift.data(), n);
    in.read_reals("norm_scale", model.norm.scale.data(), n);

    model.layer.weights.resize(p, n);
    in.expect("weights");
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j)
            model.layer.weights(i, j) = in.number<double>("weight");
    model.layer.biases.resize(p);
    in.read_reals("biases", model.layer.biases.data(), p);

    // The plan is implicit; rebuild it and check the stored width.
    if (model.design.tag == ModelDesign::Tag::Efficient) {
        model.design.pairing = build_pairing_plan(p, tau);
        if (model.design.pairing.size() != m)
            throw DataError("model file: hidden_width " + std::to_string(m) +
                            " does not match pairing of p_units=" + std::to_string(p) +
                            " tau=" + std::to_string(tau) + " (" +
                            std::to_string(model.design.pairing.size()) + " pairs)");
    } else if (m != p) {
        throw DataError("model file: baseline hidden_width must equal p_units");
    }

    model.beta.resize(m, q);
    in.expect("beta");
    for (int k = 0; k < m; ++k)
        for (int c = 0; c < q; ++c)
            model.beta(k, c) = in.number<double>("beta");
    in.expect("end");
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << model_to_string(model);
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_string(ss.str());
}

} // namespace nnrw
