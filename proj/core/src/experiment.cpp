#include "amlgraph/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "amlgraph/community.hpp"
#include "amlgraph/errors.hpp"
#include "amlgraph/graph_io.hpp"
#include "json.hpp"

namespace amlgraph {

namespace {

double to_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config: key '" + key + "' needs a number, got '" +
                          value + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE ||
        value.find('-') != std::string::npos)
        throw ConfigError("config: key '" + key +
                          "' needs a non-negative integer, got '" + value + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_ratio_list(const std::string& key,
                                     const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double(key, item));
    }
    return out;
}

}  // namespace

void parse_config_key(ExperimentConfig& c, const std::string& key,
                      const std::string& value) {
    if (key == "dataset") {
        if (value != "crowdsourcing" && value != "hacker" && value != "files")
            throw ConfigError("config: dataset must be crowdsourcing, hacker or "
                              "files, got '" + value + "'");
        c.dataset = value;
    } else if (key == "nodes_csv") {
        c.nodes_csv = value;
    } else if (key == "edges_csv") {
        c.edges_csv = value;
    } else if (key == "labels_csv") {
        c.labels_csv = value;
    } else if (key == "groups_csv") {
        c.groups_csv = value;
    } else if (key == "group_source") {
        if (value != "native" && value != "modularity" && value != "none")
            throw ConfigError("config: group_source must be native, modularity "
                              "or none, got '" + value + "'");
        c.group_source = value;
    } else if (key == "train_ratio") {
        c.train_ratio = to_double(key, value);
    } else if (key == "label_ratios") {
        c.label_ratios = parse_ratio_list(key, value);
    } else if (key == "output_dir") {
        c.output_dir = value;
    } else if (key == "seed") {
        c.train.seed = to_u64(key, value);
    } else if (key == "epochs") {
        c.train.epochs = to_u64(key, value);
    } else if (key == "batch_count") {
        c.train.batch_count = to_u64(key, value);
    } else if (key == "embed_dim") {
        c.train.embed_dim = to_u64(key, value);
    } else if (key == "layers") {
        c.train.layer_count = to_u64(key, value);
    } else if (key == "lr") {
        c.train.learning_rate = to_double(key, value);
    } else if (key == "lambda") {
        c.train.lambda = to_double(key, value);
    } else if (key == "weight0") {
        c.train.weight0 = to_double(key, value);
    } else if (key == "weight1") {
        c.train.weight1 = to_double(key, value);
    } else if (key == "gang_count") {
        c.synth.gang_count = to_u64(key, value);
    } else if (key == "pyramid_depth") {
        c.synth.pyramid_depth = to_u64(key, value);
    } else if (key == "pyramid_fanout") {
        c.synth.pyramid_fanout = to_u64(key, value);
    } else if (key == "labor_per_agent") {
        c.synth.labor_per_agent = to_u64(key, value);
    } else if (key == "collectors_per_gang") {
        c.synth.collectors_per_gang = to_u64(key, value);
    } else if (key == "cross_gang_sharing") {
        c.synth.cross_gang_sharing = to_double(key, value);
    } else if (key == "background_account_count") {
        c.synth.background_account_count = to_u64(key, value);
    } else if (key == "background_tx_rate") {
        c.synth.background_tx_rate = to_double(key, value);
    } else if (key == "mimic_hub_count") {
        c.synth.mimic_hub_count = to_u64(key, value);
    } else if (key == "benign_cluster_count") {
        c.synth.benign_cluster_count = to_u64(key, value);
    } else if (key == "benign_cluster_size") {
        c.synth.benign_cluster_size = to_u64(key, value);
    } else if (key == "account_feature_count") {
        c.synth.account_feature_count = to_u64(key, value);
    } else if (key == "amount_mu") {
        c.synth.amount_mu = to_double(key, value);
    } else if (key == "amount_sigma") {
        c.synth.amount_sigma = to_double(key, value);
    } else if (key == "payout_sigma") {
        c.synth.payout_sigma = to_double(key, value);
    } else if (key == "time_window") {
        c.synth.time_window = to_double(key, value);
    } else if (key == "burst_width") {
        c.synth.burst_width = to_double(key, value);
    } else if (key == "layer_count") {
        c.synth.layer_count = to_u64(key, value);
    } else if (key == "layer_width") {
        c.synth.layer_width = to_u64(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    ExperimentConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path.filename().string() + ":" +
                              std::to_string(lineno) + " expected key = value");
        parse_config_key(config, trim(line.substr(0, eq)),
                         trim(line.substr(eq + 1)));
    }
    return config;
}

namespace {

std::string canonical_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "dataset=" << c.dataset << ";nodes=" << c.nodes_csv.string()
        << ";edges=" << c.edges_csv.string() << ";labels=" << c.labels_csv.string()
        << ";groups=" << c.groups_csv.string() << ";group_source=" << c.group_source
        << ";train_ratio=" << c.train_ratio << ";ratios=";
    for (double r : c.label_ratios) out << r << ",";
    out << ";embed_dim=" << c.train.embed_dim << ";layers=" << c.train.layer_count
        << ";lr=" << c.train.learning_rate << ";lambda=" << c.train.lambda
        << ";epochs=" << c.train.epochs << ";batch_count=" << c.train.batch_count
        << ";w0=" << c.train.weight0 << ";w1=" << c.train.weight1
        << ";seed=" << c.train.seed << ";synth=" << c.synth.gang_count << ","
        << c.synth.pyramid_depth << "," << c.synth.pyramid_fanout << ","
        << c.synth.labor_per_agent << "," << c.synth.collectors_per_gang << ","
        << c.synth.cross_gang_sharing << "," << c.synth.background_account_count
        << "," << c.synth.background_tx_rate << "," << c.synth.mimic_hub_count
        << "," << c.synth.benign_cluster_count << "," << c.synth.benign_cluster_size
        << "," << c.synth.account_feature_count << "," << c.synth.amount_mu << ","
        << c.synth.amount_sigma << "," << c.synth.payout_sigma << ","
        << c.synth.time_window << "," << c.synth.burst_width << ","
        << c.synth.layer_count << "," << c.synth.layer_width;
    return out.str();
}

}  // namespace

std::string config_hash(const ExperimentConfig& config) {
    const std::string canon = canonical_config(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Dataset acquire_dataset(const ExperimentConfig& config) {
    Dataset data;
    if (config.dataset == "files") {
        if (config.nodes_csv.empty() || config.edges_csv.empty() ||
            config.labels_csv.empty())
            throw ConfigError("config: files dataset needs nodes_csv, edges_csv "
                              "and labels_csv");
        data.graph = load_graph(config.nodes_csv, config.edges_csv);
        data.labels = load_labels(config.labels_csv, data.graph);
        if (!config.groups_csv.empty()) {
            data.relation_edges = load_relation_edges(config.groups_csv, data.graph);
            data.native_groups = weakly_connected_components(data.relation_edges);
        }
        data.id = config.edges_csv.stem().string();
        return data;
    }

    SynthConfig synth = config.synth;
    synth.seed = config.train.seed;  // one seed drives generation and training
    SynthResult generated = config.dataset == "hacker" ? gen_hacker(synth)
                                                       : gen_crowdsourcing(synth);
    data.graph = std::move(generated.graph);
    data.labels = std::move(generated.labels);
    data.relation_edges = std::move(generated.relation_edges);
    data.native_groups = std::move(generated.groups);
    data.id = config.dataset;
    return data;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (!(config.train_ratio > 0.0 && config.train_ratio <= 1.0))
        throw ConfigError("config: train_ratio outside (0, 1]");
    Dataset data = acquire_dataset(config);

    GroupPartition groups;
    if (config.group_source == "native") {
        groups = filter_groups(data.native_groups);
    } else if (config.group_source == "modularity") {
        groups = filter_groups(derive_groups_modularity(data.graph,
                                                        config.train.seed));
    }

    const bool want_groups = config.group_source != "none";
    GroupVector group_vector;
    bool have_groups = false;
    if (want_groups && !groups.groups.empty()) {
        group_vector = build_group_vector(data.graph, groups);
        if (group_vector.degenerate)
            throw ConfigError("experiment: group vector is degenerate (every "
                              "transaction in-group); refusing to train");
        have_groups = true;
    }

    LabelSet split = split_labels(data.labels, config.train_ratio,
                                  config.train.seed);
    data.graph.standardize_attributes(split.train_mask);

    ExperimentResult result;
    result.training = train(data.graph, split, have_groups ? &group_vector : nullptr,
                            config.train);
    result.mode = result.training.group_task_active ? "multi-task" : "single-task";
    result.dataset_id = data.id;

    const Tensor embeddings = encode(data.graph, result.training.model.encoder);
    const DetectionMatrix detection =
        classify(embeddings, result.training.model.classifier);
    const Predictions predictions = predict(detection);
    const std::vector<double> scores = laundering_scores(detection);

    std::vector<std::uint8_t> test_pred, test_truth;
    std::vector<double> test_scores;
    for (std::size_t i = 0; i < split.size(); ++i) {
        if (!split.test_mask[i]) continue;
        test_pred.push_back(predictions.laundering[i]);
        test_truth.push_back(static_cast<std::uint8_t>(split.laundering[i]));
        test_scores.push_back(scores[i]);
    }
    if (test_truth.empty())
        throw ConfigError("experiment: test mask is empty (train_ratio too high)");

    const ConfusionCounts counts = confusion(test_pred, test_truth);
    result.metrics.confusion = counts;
    result.metrics.precision = precision(counts);
    result.metrics.recall = recall(counts);
    result.metrics.f1 = f1_score(test_pred, test_truth);
    result.metrics.auc = auc(test_scores, test_truth);
    result.metrics.dataset_id = data.id;
    result.metrics.config_hash = config_hash(config);
    result.metrics.seed = config.train.seed;
    return result;
}

namespace {

nlohmann::ordered_json metrics_block(const MetricsReport& m) {
    nlohmann::ordered_json j;
    j["f1"] = m.f1;
    j["auc"] = m.auc;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["confusion"] = {{"tp", m.confusion.true_positive},
                      {"fp", m.confusion.false_positive},
                      {"tn", m.confusion.true_negative},
                      {"fn", m.confusion.false_negative}};
    return j;
}

}  // namespace

std::string report_json(const ExperimentConfig& config,
                        const ExperimentResult& result, double duration_seconds) {
    nlohmann::ordered_json j;
    j["dataset"] = result.dataset_id;
    j["mode"] = result.mode;
    j["group_source"] = config.group_source;
    j["config_hash"] = config_hash(config);
    j["seed"] = config.train.seed;
    j["train_ratio"] = config.train_ratio;
    j["lambda"] = config.train.lambda;
    j["class_weights"] = {result.training.weight0, result.training.weight1};
    j["metrics"] = metrics_block(result.metrics);
    if (!result.training.history.empty()) {
        const EpochStats& last = result.training.history.back();
        j["training"] = {{"epochs", result.training.history.size()},
                         {"final_loss_m", last.laundering_loss},
                         {"final_loss_g", last.group_loss},
                         {"final_loss_total", last.total_loss}};
    }
    j["timing_seconds"] = duration_seconds;
    return j.dump(2) + "\n";
}

std::vector<SweepRow> label_ratio_sweep(const ExperimentConfig& config) {
    if (config.label_ratios.size() < 2)
        throw ConfigError("sweep: need at least 2 label ratios");
    std::vector<double> seen;
    for (double r : config.label_ratios) {
        if (!(r > 0.0 && r <= 1.0))
            throw ConfigError("sweep: ratio " + std::to_string(r) +
                              " outside (0, 1]");
        if (std::find(seen.begin(), seen.end(), r) != seen.end())
            throw ConfigError("sweep: duplicate ratio " + std::to_string(r));
        seen.push_back(r);
    }

    std::vector<SweepRow> rows;
    for (double ratio : config.label_ratios) {
        ExperimentConfig arm = config;
        arm.train_ratio = ratio;
        arm.label_ratios.clear();
        const ExperimentResult result = run_experiment(arm);
        rows.push_back({ratio, result.metrics.f1, result.metrics.auc,
                        config.train.seed});
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "ratio,f1,auc,seed\n";
    char buf[128];
    for (const SweepRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%llu\n", row.ratio, row.f1,
                      row.auc, static_cast<unsigned long long>(row.seed));
        out << buf;
    }
}

std::vector<AblationRow> ablation_group_source(const ExperimentConfig& config) {
    std::vector<AblationRow> rows;
    for (const char* source : {"none", "native", "modularity"}) {
        ExperimentConfig arm = config;
        arm.group_source = source;
        const ExperimentResult result = run_experiment(arm);
        rows.push_back({source, result.metrics, result.mode});
    }
    return rows;
}

std::string ablation_json(const ExperimentConfig& config,
                          const std::vector<AblationRow>& rows) {
    nlohmann::ordered_json j;
    j["dataset"] = config.dataset;
    j["seed"] = config.train.seed;
    j["config_hash"] = config_hash(config);
    nlohmann::ordered_json arms = nlohmann::ordered_json::array();
    for (const AblationRow& row : rows) {
        nlohmann::ordered_json arm;
        arm["group_source"] = row.group_source;
        arm["mode"] = row.mode;
        arm["metrics"] = metrics_block(row.metrics);
        arms.push_back(arm);
    }
    j["arms"] = arms;
    return j.dump(2) + "\n";
}

}  // namespace amlgraph
