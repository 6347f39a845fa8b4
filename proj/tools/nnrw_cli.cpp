#include "nnrw/costing.hpp"
#include "nnrw/harness.hpp"
#include "nnrw/pairing.hpp"
#include "nnrw/serialize.hpp"
#include "nnrw/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

nnrw::LabelColumn parse_label_col(const std::string& v) {
    if (v == "first")
        return nnrw::LabelColumn::First;
    if (v == "last")
        return nnrw::LabelColumn::Last;
    throw CLI::ValidationError("--label-col must be first|last");
}

nnrw::Delimiter parse_delim(const std::string& v) {
    if (v == "comma")
        return nnrw::Delimiter::Comma;
    if (v == "space")
        return nnrw::Delimiter::Space;
    if (v == "tab")
        return nnrw::Delimiter::Tab;
    throw CLI::ValidationError("--delim must be comma|space|tab");
}

// Flat key = value model description for `train`. Keys: design
// (efficient|baseline), p, tau (efficient), m (baseline), distribution
// ("uniform <w>" | "normal <mu> <sigma>"), seed, lambda, solver (ridge|pinv).
nnrw::ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw nnrw::IoError("cannot open '" + path + "'");

    nnrw::ModelConfig config;
    bool saw_design = false;
    bool saw_seed = false;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw nnrw::DataError(path + ":" + std::to_string(line_no) +
                                  ": expected key = value");
        auto strip = [](std::string s) {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                return std::string();
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key == "design") {
            if (value == "efficient")
                config.design = nnrw::ModelDesign::Tag::Efficient;
            else if (value == "baseline")
                config.design = nnrw::ModelDesign::Tag::Baseline;
            else
                throw nnrw::DataError(path + ": design must be efficient|baseline");
            saw_design = true;
        } else if (key == "p") {
            config.p_units = std::stoi(value);
        } else if (key == "tau") {
            config.tau = std::stoi(value);
        } else if (key == "m") {
            config.m_units = std::stoi(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
            saw_seed = true;
        } else if (key == "lambda") {
            config.lambda = std::stod(value);
        } else if (key == "solver") {
            if (value == "ridge")
                config.solver = nnrw::SolveMethod::Ridge;
            else if (value == "pinv")
                config.solver = nnrw::SolveMethod::Pseudoinverse;
            else
                throw nnrw::DataError(path + ": solver must be ridge|pinv");
        } else if (key == "distribution") {
            std::istringstream ss(value);
            std::string kind;
            ss >> kind;
            if (kind == "uniform") {
                double w = 0.0;
                if (!(ss >> w))
                    throw nnrw::DataError(path + ": distribution uniform needs a half-width");
                config.distribution = nnrw::Distribution::uniform_symmetric(w);
            } else if (kind == "normal") {
                double mu = 0.0, sigma = 0.0;
                if (!(ss >> mu >> sigma))
                    throw nnrw::DataError(path + ": distribution normal needs mean and stddev");
                config.distribution = nnrw::Distribution::normal(mu, sigma);
            } else {
                throw nnrw::DataError(path + ": unknown distribution '" + kind + "'");
            }
        } else {
            throw nnrw::DataError(path + ":" + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
        }
    }
    if (!saw_design)
        throw nnrw::DataError(path + ": design is required");
    if (!saw_seed)
        throw nnrw::DataError(path + ": seed is required");
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-weight feedforward classifiers with paired hidden units"};
    app.require_subcommand(1);

    // pairs
    auto* pairs_cmd = app.add_subcommand("pairs", "Count or list the stride pairing");
    int pairs_p = 0, pairs_tau = 0;
    bool pairs_list = false;
    pairs_cmd->add_option("--p", pairs_p, "Primary unit count")->required();
    pairs_cmd->add_option("--tau", pairs_tau, "Pairing stride")->required();
    pairs_cmd->add_flag("--list", pairs_list, "Also print the pair list as CSV k,i,j");

    // cost
    auto* cost_cmd = app.add_subcommand("cost", "Inference MAC counts for given dimensions");
    int cost_n = 0, cost_p = 0, cost_m = 0, cost_q = 0;
    cost_cmd->add_option("--n", cost_n, "Input features")->required();
    cost_cmd->add_option("--p", cost_p, "Primary units")->required();
    cost_cmd->add_option("--m", cost_m, "Hidden units")->required();
    cost_cmd->add_option("--q", cost_q, "Classes")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model and write it to a file");
    std::string train_config, train_data, train_out;
    std::string train_label_col = "last", train_delim = "space";
    train_cmd->add_option("--config", train_config, "Model config file")->required();
    train_cmd->add_option("--data", train_data, "Training data file")->required();
    train_cmd->add_option("--out", train_out, "Output model file")->required();
    train_cmd->add_option("--label-col", train_label_col, "first|last (default last)");
    train_cmd->add_option("--delim", train_delim, "comma|space|tab (default space)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model file on a dataset");
    std::string eval_model, eval_data;
    std::string eval_label_col = "last", eval_delim = "space";
    eval_cmd->add_option("--model", eval_model, "Model file")->required();
    eval_cmd->add_option("--data", eval_data, "Data file")->required();
    eval_cmd->add_option("--label-col", eval_label_col, "first|last (default last)");
    eval_cmd->add_option("--delim", eval_delim, "comma|space|tab (default space)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment config, write a CSV report");
    std::string sweep_config, sweep_out;
    sweep_cmd->add_option("--config", sweep_config, "Experiment config file")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output CSV path")->required();

    // tau-select
    auto* tau_cmd = app.add_subcommand(
        "tau-select", "Pick the stride from the baseline rows of an experiment config");
    std::string tau_config;
    tau_cmd->add_option("--config", tau_config, "Experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*pairs_cmd) {
            const std::int64_t count = nnrw::pair_count(pairs_p, pairs_tau);
            std::printf("%lld\n", static_cast<long long>(count));
            if (pairs_list) {
                const nnrw::PairingPlan plan = nnrw::build_pairing_plan(pairs_p, pairs_tau);
                for (std::size_t k = 0; k < plan.pairs.size(); ++k)
                    std::printf("%zu,%d,%d\n", k, plan.pairs[k].first, plan.pairs[k].second);
            }
        } else if (*cost_cmd) {
            const nnrw::CostReport r = nnrw::cost_report(cost_n, cost_p, cost_m, cost_q);
            std::printf("%d,%d,%d,%d,%lld,%lld,%.4f\n", r.n_features, r.p_units,
                        r.hidden_width, r.n_classes,
                        static_cast<long long>(r.efficient_macs),
                        static_cast<long long>(r.baseline_macs), r.reduction_percent);
        } else if (*train_cmd) {
            const nnrw::ModelConfig config = load_model_config(train_config);
            const nnrw::Dataset data =
                nnrw::load_delimited(train_data, parse_label_col(train_label_col),
                                     parse_delim(train_delim));
            nnrw::SolveDiagnostics diag;
            const auto t0 = std::chrono::steady_clock::now();
            const nnrw::TrainedModel model = nnrw::train(config, data, &diag);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            nnrw::save_model(model, train_out);
            std::fprintf(stderr, "method=%s\n", diag.method.c_str());
            std::fprintf(stderr, "spd_fallback=%d\n", diag.spd_fallback ? 1 : 0);
            std::fprintf(stderr, "condition_estimate=%.6g\n", diag.condition_estimate);
            std::fprintf(stderr, "rank=%ld\n", diag.rank);
            std::fprintf(stderr, "train_seconds=%.4f\n", seconds);
        } else if (*eval_cmd) {
            const nnrw::TrainedModel model = nnrw::load_model(eval_model);
            const nnrw::Dataset data =
                nnrw::load_delimited(eval_data, parse_label_col(eval_label_col),
                                     parse_delim(eval_delim));
            std::printf("%.4f\n", nnrw::accuracy_percent(model, data));
        } else if (*sweep_cmd) {
            const nnrw::ExperimentConfig config = nnrw::load_experiment_config(sweep_config);
            const nnrw::ExperimentReport report = nnrw::sweep(config, &std::cerr);
            nnrw::emit_report(report, sweep_out);
        } else if (*tau_cmd) {
            const nnrw::ExperimentConfig config = nnrw::load_experiment_config(tau_config);
            const nnrw::TauSelection sel = nnrw::tau_procedure(config, &std::cerr);
            std::printf("m_star=%lld tau=%d p=%d\n", static_cast<long long>(sel.m_star),
                        sel.tau, sel.p_units);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
