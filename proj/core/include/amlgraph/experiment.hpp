#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "amlgraph/metrics.hpp"
#include "amlgraph/synth.hpp"
#include "amlgraph/trainer.hpp"

namespace amlgraph {

/// One experiment: dataset (generated or loaded), group source, split and
/// training settings. Parsed from a flat key/value config file; every field
/// has a documented key (see parse_config_key).
struct ExperimentConfig {
    std::string dataset = "crowdsourcing";  // crowdsourcing | hacker | files
    std::filesystem::path nodes_csv;
    std::filesystem::path edges_csv;
    std::filesystem::path labels_csv;
    std::filesystem::path groups_csv;  // optional even for files datasets
    SynthConfig synth;

    std::string group_source = "native";  // native | modularity | none
    double train_ratio = 0.7;
    std::vector<double> label_ratios;  // sweep arms
    std::filesystem::path output_dir = ".";
    TrainConfig train;
};

/// Parses `key = value` lines ('#' comments, blank lines ignored). Unknown
/// keys are rejected; repeated keys keep the last value.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Applies one key/value pair (also used for command-line overrides).
/// Throws ConfigError on unknown keys or unparsable values.
void parse_config_key(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

/// FNV-1a hash (hex) of the canonical serialization of the config.
std::string config_hash(const ExperimentConfig& config);

/// Dataset materialized for a run.
struct Dataset {
    TransactionGraph graph;
    LabelSet labels;  // raw labels, masks empty
    std::vector<std::pair<AccountId, AccountId>> relation_edges;
    GroupPartition native_groups;
    std::string id;  // scenario name or file stem
};

/// Generates or loads the dataset named by the config (attributes are left
/// raw; run_experiment standardizes after splitting).
Dataset acquire_dataset(const ExperimentConfig& config);

struct ExperimentResult {
    MetricsReport metrics;
    TrainResult training;
    std::string mode;  // "multi-task" or "single-task"
    std::string dataset_id;
};

/// Full pipeline: dataset -> group vector per group_source -> stratified
/// split -> attribute standardization (fit on train rows) -> train ->
/// laundering metrics on the test mask. Degenerate group vectors with
/// group_source != none are a configuration error; an *empty* group source
/// (no relation edges) degrades to single-task mode.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Report JSON. Deterministic for fixed config + seed; wall-clock duration
/// lives in its own "timing_seconds" field so the rest is comparable.
std::string report_json(const ExperimentConfig& config,
                        const ExperimentResult& result, double duration_seconds);

struct SweepRow {
    double ratio = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    std::uint64_t seed = 0;
};

/// Runs one experiment per ratio in config.label_ratios (each replacing
/// train_ratio). Needs >= 2 distinct ratios in (0, 1].
std::vector<SweepRow> label_ratio_sweep(const ExperimentConfig& config);

/// CSV with header `ratio,f1,auc,seed`.
void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path);

struct AblationRow {
    std::string group_source;
    MetricsReport metrics;
    std::string mode;
};

/// Reruns the experiment with group sources {none, native, modularity},
/// sharing the seed, and reports them side by side.
std::vector<AblationRow> ablation_group_source(const ExperimentConfig& config);

std::string ablation_json(const ExperimentConfig& config,
                          const std::vector<AblationRow>& rows);

}  // namespace amlgraph
