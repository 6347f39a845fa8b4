#pragma once

#include "nnrw/data.hpp"
#include "nnrw/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nnrw {

// One sweep grid entry: a design plus its size parameters.
struct GridEntry {
    ModelDesign::Tag design = ModelDesign::Tag::Baseline;
    int p_units = 0; // Efficient
    int tau = 0;     // Efficient
    int m_units = 0; // Baseline
};

// Parsed experiment configuration. Exactly one dataset mode is active:
// fixed files (train_path/test_path) or a single file randomly re-split
// every trial (data_path/train_fraction).
struct ExperimentConfig {
    std::string dataset_name;
    std::string train_path;
    std::string test_path;
    std::string data_path;
    double train_fraction = 0.0;
    LabelColumn label_column = LabelColumn::Last;
    Delimiter delimiter = Delimiter::Space;
    std::vector<GridEntry> grid;
    int trials = 1;
    std::uint64_t base_seed = 0;
    double lambda = 0.01;
    SolveMethod solver = SolveMethod::Ridge;
    Distribution distribution = Distribution{};
    bool wall_timing = true; // false writes 0 timings, making reports byte-stable

    bool resplit_per_trial() const { return !data_path.empty(); }
};

struct ReportRow {
    std::string dataset;
    ModelDesign::Tag design = ModelDesign::Tag::Baseline;
    int p_units = 0;
    int tau = 0;
    std::int64_t hidden_width = 0;
    std::vector<double> accuracies; // percent, one per trial
    std::vector<double> train_seconds;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double mean_seconds = 0.0;
    double std_seconds = 0.0;
    std::int64_t efficient_macs = 0;
    std::int64_t baseline_macs = 0;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
};

struct TauSelection {
    std::int64_t m_star = 0;
    int tau = 0;
    int p_units = 0;
};

// Parses the flat key = value config format. Unknown keys are rejected;
// see README for the full key list. Only lambda, solver, distribution and
// timing carry defaults.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& origin = "<config>");

// Runs `config.trials` trainings of one grid entry. Trial t uses seed
// base_seed + t; the weight stream and (in re-split mode) the split stream
// are derived from it with distinct tags. In re-split mode `train` is the
// full dataset and `test` is ignored. Progress lines, if a sink is given,
// are written one complete line at a time.
ReportRow run_trials(const ExperimentConfig& config, const GridEntry& entry,
                     const Dataset& train, const Dataset& test,
                     std::ostream* progress = nullptr);

// One ReportRow per grid entry, in grid order.
ExperimentReport sweep(const ExperimentConfig& config,
                       std::ostream* progress = nullptr);

// Baseline-peak stride selection: runs the baseline entries of the grid,
// takes the hidden width with the highest mean test accuracy (ties go to
// the smaller width), then derives tau and the primary unit count for it.
TauSelection tau_procedure(const ExperimentConfig& config,
                           std::ostream* progress = nullptr);

// CSV with header dataset,design,P,tau,M,trial,accuracy,train_seconds,
// efficient_macs,baseline_macs; one line per trial plus mean/std summary
// lines. Accuracies and timings carry 4 decimal places.
std::string report_to_csv(const ExperimentReport& report);
void emit_report(const ExperimentReport& report, const std::string& path);

// Reads back a CSV produced by report_to_csv.
ExperimentReport parse_report_csv(const std::string& text);

} // namespace nnrw
