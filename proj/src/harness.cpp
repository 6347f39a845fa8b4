#include "nnrw/harness.hpp"

#include "nnrw/costing.hpp"
#include "nnrw/pairing.hpp"
#include "nnrw/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nnrw {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(const std::string& origin, long line_no,
                              const std::string& what) {
    throw DataError(origin + ":" + std::to_string(line_no) + ": " + what);
}

GridEntry parse_grid_entry(const std::string& value, const std::string& origin,
                           long line_no) {
    std::istringstream ss(value);
    std::string design;
    ss >> design;
    GridEntry entry;
    if (design == "efficient")
        entry.design = ModelDesign::Tag::Efficient;
    else if (design == "baseline")
        entry.design = ModelDesign::Tag::Baseline;
    else
        config_fail(origin, line_no, "row design must be 'efficient' or 'baseline'");

    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            config_fail(origin, line_no, "row parameter '" + tok + "' is not key=value");
        const std::string key = tok.substr(0, eq);
        int val = 0;
        try {
            val = std::stoi(tok.substr(eq + 1));
        } catch (const std::exception&) {
            config_fail(origin, line_no, "row parameter '" + tok + "' has a bad value");
        }
        if (key == "p")
            entry.p_units = val;
        else if (key == "tau")
            entry.tau = val;
        else if (key == "m")
            entry.m_units = val;
        else
            config_fail(origin, line_no, "unknown row parameter '" + key + "'");
    }

    if (entry.design == ModelDesign::Tag::Efficient) {
        if (entry.p_units < 2 || entry.tau < 1 || entry.tau >= entry.p_units)
            config_fail(origin, line_no,
                        "efficient row needs p >= 2 and 1 <= tau <= p-1");
        if (entry.m_units != 0)
            config_fail(origin, line_no, "efficient row does not take m");
    } else {
        if (entry.m_units < 1)
            config_fail(origin, line_no, "baseline row needs m >= 1");
        if (entry.p_units != 0 || entry.tau != 0)
            config_fail(origin, line_no, "baseline row takes only m");
    }
    return entry;
}

Distribution parse_distribution(const std::string& value, const std::string& origin,
                                long line_no) {
    std::istringstream ss(value);
    std::string kind;
    ss >> kind;
    if (kind == "uniform") {
        double half_width = 0.0;
        if (!(ss >> half_width))
            config_fail(origin, line_no, "distribution uniform needs a half-width");
        return Distribution::uniform_symmetric(half_width);
    }
    if (kind == "normal") {
        double mean = 0.0, stddev = 0.0;
        if (!(ss >> mean >> stddev))
            config_fail(origin, line_no, "distribution normal needs mean and stddev");
        return Distribution::normal(mean, stddev);
    }
    config_fail(origin, line_no, "distribution must be 'uniform <w>' or 'normal <mu> <sigma>'");
}

struct Aggregates {
    double mean = 0.0;
    double stddev = 0.0;
};

// Population standard deviation, so a single trial reports std 0.
Aggregates aggregate(const std::vector<double>& values) {
    Aggregates a;
    if (values.empty())
        return a;
    double sum = 0.0;
    for (const double v : values)
        sum += v;
    a.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (const double v : values)
        sq += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    return a;
}

std::string design_name(ModelDesign::Tag tag) {
    return tag == ModelDesign::Tag::Efficient ? "efficient" : "baseline";
}

// Loads the configured dataset(s). In re-split mode the full set comes back
// as `first` and `second` stays empty.
std::pair<Dataset, Dataset> load_datasets(const ExperimentConfig& config) {
    if (config.resplit_per_trial()) {
        Dataset full = load_delimited(config.data_path, config.label_column,
                                      config.delimiter, config.dataset_name);
        return {std::move(full), Dataset{}};
    }
    Dataset train = load_delimited(config.train_path, config.label_column,
                                   config.delimiter, config.dataset_name + "/train");
    Dataset test = load_delimited(config.test_path, config.label_column,
                                  config.delimiter, config.dataset_name + "/test");
    if (train.feature_count() != test.feature_count())
        throw DataError(config.dataset_name + ": train has " +
                        std::to_string(train.feature_count()) +
                        " features but test has " +
                        std::to_string(test.feature_count()));
    return {std::move(train), std::move(test)};
}

void emit_progress(std::ostream* progress, const std::string& line) {
    if (!progress)
        return;
    (*progress) << (line + "\n") << std::flush;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& origin) {
    ExperimentConfig config;
    bool saw_label_column = false;
    bool saw_delimiter = false;
    bool saw_trials = false;
    bool saw_base_seed = false;
    bool saw_fraction = false;

    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            config_fail(origin, line_no, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (value.empty())
            config_fail(origin, line_no, "empty value for '" + key + "'");

        try {
            if (key == "dataset_name") {
                config.dataset_name = value;
            } else if (key == "train_path") {
                config.train_path = value;
            } else if (key == "test_path") {
                config.test_path = value;
            } else if (key == "data_path") {
                config.data_path = value;
            } else if (key == "train_fraction") {
                config.train_fraction = std::stod(value);
                saw_fraction = true;
            } else if (key == "label_column") {
                if (value == "first")
                    config.label_column = LabelColumn::First;
                else if (value == "last")
                    config.label_column = LabelColumn::Last;
                else
                    config_fail(origin, line_no, "label_column must be first|last");
                saw_label_column = true;
            } else if (key == "delimiter") {
                if (value == "comma")
                    config.delimiter = Delimiter::Comma;
                else if (value == "space")
                    config.delimiter = Delimiter::Space;
                else if (value == "tab")
                    config.delimiter = Delimiter::Tab;
                else
                    config_fail(origin, line_no, "delimiter must be comma|space|tab");
                saw_delimiter = true;
            } else if (key == "trials") {
                config.trials = std::stoi(value);
                saw_trials = true;
            } else if (key == "base_seed") {
                config.base_seed = std::stoull(value);
                saw_base_seed = true;
            } else if (key == "lambda") {
                config.lambda = std::stod(value);
            } else if (key == "solver") {
                if (value == "ridge")
                    config.solver = SolveMethod::Ridge;
                else if (value == "pinv")
                    config.solver = SolveMethod::Pseudoinverse;
                else
                    config_fail(origin, line_no, "solver must be ridge|pinv");
            } else if (key == "distribution") {
                config.distribution = parse_distribution(value, origin, line_no);
            } else if (key == "timing") {
                if (value == "wall")
                    config.wall_timing = true;
                else if (value == "none")
                    config.wall_timing = false;
                else
                    config_fail(origin, line_no, "timing must be wall|none");
            } else if (key == "row") {
                config.grid.push_back(parse_grid_entry(value, origin, line_no));
            } else {
                config_fail(origin, line_no, "unknown key '" + key + "'");
            }
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            config_fail(origin, line_no, std::string(e.what()));
        }
    }

    // Cross-field validation.
    if (config.dataset_name.empty())
        throw DataError(origin + ": dataset_name is required");
    const bool fixed_mode = !config.train_path.empty() || !config.test_path.empty();
    const bool resplit_mode = !config.data_path.empty() || saw_fraction;
    if (fixed_mode && resplit_mode)
        throw DataError(origin + ": use either train_path/test_path or "
                                 "data_path/train_fraction, not both");
    if (fixed_mode && (config.train_path.empty() || config.test_path.empty()))
        throw DataError(origin + ": fixed mode needs both train_path and test_path");
    if (resplit_mode && (config.data_path.empty() || !saw_fraction))
        throw DataError(origin + ": re-split mode needs data_path and train_fraction");
    if (!fixed_mode && !resplit_mode)
        throw DataError(origin + ": no dataset configured");
    if (resplit_mode && !(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw DataError(origin + ": train_fraction must be in (0, 1)");
    if (!saw_label_column)
        throw DataError(origin + ": label_column is required");
    if (!saw_delimiter)
        throw DataError(origin + ": delimiter is required");
    if (!saw_trials || config.trials < 1)
        throw DataError(origin + ": trials must be set and >= 1");
    if (!saw_base_seed)
        throw DataError(origin + ": base_seed is required");
    if (config.grid.empty())
        throw DataError(origin + ": at least one row is required");
    if (!(config.lambda > 0.0) && config.solver == SolveMethod::Ridge)
        throw DataError(origin + ": lambda must be > 0 for the ridge solver");
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str(), path);
}

ReportRow run_trials(const ExperimentConfig& config, const GridEntry& entry,
                     const Dataset& train, const Dataset& test,
                     std::ostream* progress) {
    const int n_features = train.feature_count();
    const int n_classes = train.class_count();

    ReportRow row;
    row.dataset = config.dataset_name;
    row.design = entry.design;
    if (entry.design == ModelDesign::Tag::Efficient) {
        row.p_units = entry.p_units;
        row.tau = entry.tau;
        row.hidden_width = pair_count(entry.p_units, entry.tau);
    } else {
        // The basic design has one weight vector per hidden unit: P = M.
        row.p_units = entry.m_units;
        row.tau = 0;
        row.hidden_width = entry.m_units;
    }
    row.efficient_macs = efficient_macs(n_features, row.p_units,
                                        static_cast<int>(row.hidden_width), n_classes);
    row.baseline_macs = baseline_macs(n_features, static_cast<int>(row.hidden_width),
                                      n_classes);

    row.accuracies.reserve(static_cast<std::size_t>(config.trials));
    row.train_seconds.reserve(static_cast<std::size_t>(config.trials));
    for (int t = 0; t < config.trials; ++t) {
        const std::uint64_t trial_seed = config.base_seed + static_cast<std::uint64_t>(t);

        ModelConfig mc;
        mc.design = entry.design;
        mc.p_units = entry.p_units;
        mc.tau = entry.tau;
        mc.m_units = entry.m_units;
        mc.distribution = config.distribution;
        mc.seed = derive_seed(trial_seed, kWeightStreamTag);
        mc.lambda = config.lambda;
        mc.solver = config.solver;

        try {
            Dataset trial_train;
            Dataset trial_test;
            const Dataset* train_ptr = &train;
            const Dataset* test_ptr = &test;
            if (config.resplit_per_trial()) {
                auto parts = split(train, config.train_fraction,
                                   derive_seed(trial_seed, kSplitStreamTag));
                trial_train = std::move(parts.first);
                trial_test = std::move(parts.second);
                train_ptr = &trial_train;
                test_ptr = &trial_test;
            }

            const auto t0 = std::chrono::steady_clock::now();
            const TrainedModel model = nnrw::train(mc, *train_ptr);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            const double accuracy = accuracy_percent(model, *test_ptr);

            row.accuracies.push_back(accuracy);
            row.train_seconds.push_back(config.wall_timing ? seconds : 0.0);

            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "# %s %s P=%d tau=%d M=%lld trial %d/%d acc=%.4f (%.2fs)",
                          row.dataset.c_str(), design_name(row.design).c_str(),
                          row.p_units, row.tau,
                          static_cast<long long>(row.hidden_width), t + 1,
                          config.trials, accuracy, seconds);
            emit_progress(progress, buf);
        } catch (const std::exception& e) {
            throw std::runtime_error(row.dataset + " " + design_name(row.design) +
                                     " trial " + std::to_string(t) + " (seed " +
                                     std::to_string(trial_seed) + "): " + e.what());
        }
    }

    const Aggregates acc = aggregate(row.accuracies);
    const Aggregates sec = aggregate(row.train_seconds);
    row.mean_accuracy = acc.mean;
    row.std_accuracy = acc.stddev;
    row.mean_seconds = sec.mean;
    row.std_seconds = sec.stddev;
    return row;
}

ExperimentReport sweep(const ExperimentConfig& config, std::ostream* progress) {
    const auto [primary, test] = load_datasets(config);
    ExperimentReport report;
    report.rows.reserve(config.grid.size());
    for (const GridEntry& entry : config.grid)
        report.rows.push_back(run_trials(config, entry, primary, test, progress));
    return report;
}

TauSelection tau_procedure(const ExperimentConfig& config, std::ostream* progress) {
    std::vector<GridEntry> baseline_entries;
    for (const GridEntry& entry : config.grid)
        if (entry.design == ModelDesign::Tag::Baseline)
            baseline_entries.push_back(entry);
    if (baseline_entries.empty())
        throw std::invalid_argument("tau_procedure: the grid has no baseline rows");

    const auto [primary, test] = load_datasets(config);
    std::int64_t best_m = 0;
    double best_mean = -1.0;
    for (const GridEntry& entry : baseline_entries) {
        const ReportRow row = run_trials(config, entry, primary, test, progress);
        const bool better = row.mean_accuracy > best_mean ||
                            (row.mean_accuracy == best_mean && row.hidden_width < best_m);
        if (best_m == 0 || better) {
            best_m = row.hidden_width;
            best_mean = row.mean_accuracy;
        }
    }

    TauSelection sel;
    sel.m_star = best_m;
    sel.tau = select_tau(best_m);
    sel.p_units = fit_p_for_target(best_m, sel.tau);
    return sel;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out =
        "dataset,design,P,tau,M,trial,accuracy,train_seconds,efficient_macs,"
        "baseline_macs\n";
    char buf[256];
    for (const ReportRow& row : report.rows) {
        const std::string prefix = row.dataset + "," + design_name(row.design) + "," +
                                   std::to_string(row.p_units) + "," +
                                   std::to_string(row.tau) + "," +
                                   std::to_string(row.hidden_width);
        for (std::size_t t = 0; t < row.accuracies.size(); ++t) {
            std::snprintf(buf, sizeof(buf), "%s,%zu,%.4f,%.4f,%lld,%lld\n",
                          prefix.c_str(), t, row.accuracies[t], row.train_seconds[t],
                          static_cast<long long>(row.efficient_macs),
                          static_cast<long long>(row.baseline_macs));
            out += buf;
        }
        std::snprintf(buf, sizeof(buf), "%s,mean,%.4f,%.4f,%lld,%lld\n", prefix.c_str(),
                      row.mean_accuracy, row.mean_seconds,
                      static_cast<long long>(row.efficient_macs),
                      static_cast<long long>(row.baseline_macs));
        out += buf;
        std::snprintf(buf, sizeof(buf), "%s,std,%.4f,%.4f,%lld,%lld\n", prefix.c_str(),
                      row.std_accuracy, row.std_seconds,
                      static_cast<long long>(row.efficient_macs),
                      static_cast<long long>(row.baseline_macs));
        out += buf;
    }
    return out;
}

void emit_report(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << report_to_csv(report);
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

ExperimentReport parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        trim(line) != "dataset,design,P,tau,M,trial,accuracy,train_seconds,"
                      "efficient_macs,baseline_macs")
        throw DataError("report CSV: missing or wrong header");

    ExperimentReport report;
    ReportRow* current = nullptr;
    std::string current_key;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream ls(stripped);
        std::string tok;
        while (std::getline(ls, tok, ','))
            fields.push_back(tok);
        if (fields.size() != 10)
            throw DataError("report CSV line " + std::to_string(line_no) +
                            ": expected 10 fields, got " + std::to_string(fields.size()));

        const std::string key =
            fields[0] + "," + fields[1] + "," + fields[2] + "," + fields[3] + "," + fields[4];
        try {
            if (current == nullptr || key != current_key) {
                report.rows.emplace_back();
                current = &report.rows.back();
                current_key = key;
                current->dataset = fields[0];
                if (fields[1] == "efficient")
                    current->design = ModelDesign::Tag::Efficient;
                else if (fields[1] == "baseline")
                    current->design = ModelDesign::Tag::Baseline;
                else
                    throw DataError("unknown design '" + fields[1] + "'");
                current->p_units = std::stoi(fields[2]);
                current->tau = std::stoi(fields[3]);
                current->hidden_width = std::stoll(fields[4]);
                current->efficient_macs = std::stoll(fields[8]);
                current->baseline_macs = std::stoll(fields[9]);
            }
            if (fields[5] == "mean") {
                current->mean_accuracy = std::stod(fields[6]);
                current->mean_seconds = std::stod(fields[7]);
            } else if (fields[5] == "std") {
                current->std_accuracy = std::stod(fields[6]);
                current->std_seconds = std::stod(fields[7]);
            } else {
                const std::size_t t = static_cast<std::size_t>(std::stoul(fields[5]));
                if (t != current->accuracies.size())
                    throw DataError("trial index " + fields[5] + " out of order");
                current->accuracies.push_back(std::stod(fields[6]));
                current->train_seconds.push_back(std::stod(fields[7]));
            }
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            throw DataError("report CSV line " + std::to_string(line_no) + ": " +
                            e.what());
        }
    }
    return report;
}

} // namespace nnrw
