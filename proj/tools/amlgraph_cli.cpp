// Command-line front end: generate synthetic benchmarks, train, evaluate,
// sweep label ratios and run group-source ablations. One flat key/value
// config file plus --set overrides configure everything; see README.md for
// the key list.
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amlgraph/checkpoint.hpp"
#include "amlgraph/community.hpp"
#include "amlgraph/errors.hpp"
#include "amlgraph/experiment.hpp"
#include "amlgraph/graph_io.hpp"
#include "json.hpp"

namespace {

using namespace amlgraph;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::string output_dir;
};

ExperimentConfig build_config(const CommonArgs& args, bool seed_required) {
    ExperimentConfig config;
    if (!args.config_path.empty())
        config = parse_config_file(args.config_path);
    for (const std::string& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        parse_config_key(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed) config.train.seed = *args.seed;
    if (!args.output_dir.empty()) config.output_dir = args.output_dir;
    if (seed_required && !args.seed)
        throw ConfigError("--seed is required for this command");
    return config;
}

std::filesystem::path prepare_output(const ExperimentConfig& config) {
    std::filesystem::create_directories(config.output_dir);
    return config.output_dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

int cmd_generate(const CommonArgs& args) {
    const ExperimentConfig config = build_config(args, /*seed_required=*/true);
    if (config.dataset == "files")
        throw ConfigError("generate: dataset must be crowdsourcing or hacker");
    SynthConfig synth = config.synth;
    synth.seed = config.train.seed;
    const SynthResult result = config.dataset == "hacker"
                                   ? gen_hacker(synth)
                                   : gen_crowdsourcing(synth);

    const std::filesystem::path dir = prepare_output(config);
    write_nodes_csv(result.graph, dir / "nodes.csv");
    write_edges_csv(result.graph, dir / "edges.csv");
    write_labels_csv(result.labels, result.graph, dir / "labels.csv");
    if (!result.relation_edges.empty())
        write_groups_csv(result.relation_edges, result.graph, dir / "groups.csv");
    write_text(dir / "manifest.json",
               manifest_json(synth, result, config.dataset));

    std::cout << "wrote " << result.graph.account_count() << " accounts / "
              << result.graph.transaction_count() << " transactions to "
              << dir.string() << "\n";
    return kExitOk;
}

int cmd_train(const CommonArgs& args) {
    const ExperimentConfig config = build_config(args, /*seed_required=*/true);
    const auto started = std::chrono::steady_clock::now();
    const ExperimentResult result = run_experiment(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    const std::filesystem::path dir = prepare_output(config);
    ParamMap params = result.training.model.collect();
    save_checkpoint(
        params,
        {{"embed_dim", static_cast<std::int64_t>(config.train.embed_dim)},
         {"layers", static_cast<std::int64_t>(config.train.layer_count)},
         {"account_feature_dim",
          static_cast<std::int64_t>(
              result.training.model.encoder.account_lift.w.rows())},
         {"tx_attribute_dim",
          static_cast<std::int64_t>(
              result.training.model.encoder.attribute_lift.w.rows())},
         {"seed", static_cast<std::int64_t>(config.train.seed)}},
        dir / "checkpoint.json");

    std::ofstream log(dir / "train_log.jsonl");
    if (!log) throw DataError("cannot write train log");
    for (const EpochStats& stats : result.training.history) {
        nlohmann::ordered_json line;
        line["epoch"] = stats.epoch;
        line["loss_m"] = stats.laundering_loss;
        line["loss_g"] = stats.group_loss;
        line["loss_total"] = stats.total_loss;
        log << line.dump() << "\n";
    }
    write_text(dir / "report.json", report_json(config, result, seconds));

    std::cout << "mode=" << result.mode << " f1=" << result.metrics.f1
              << " auc=" << result.metrics.auc << " (" << seconds << "s)\n";
    return kExitOk;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint_path) {
    ExperimentConfig config = build_config(args, /*seed_required=*/false);
    const auto meta = read_checkpoint_meta(checkpoint_path);
    auto meta_value = [&](const char* key) -> std::int64_t {
        for (const auto& [k, v] : meta)
            if (k == key) return v;
        throw DataError("checkpoint: missing meta key " + std::string(key));
    };
    config.train.embed_dim = static_cast<std::size_t>(meta_value("embed_dim"));
    config.train.layer_count = static_cast<std::size_t>(meta_value("layers"));
    if (!args.seed)
        config.train.seed = static_cast<std::uint64_t>(meta_value("seed"));

    const auto started = std::chrono::steady_clock::now();
    Dataset data = acquire_dataset(config);
    LabelSet split = split_labels(data.labels, config.train_ratio,
                                  config.train.seed);
    data.graph.standardize_attributes(split.train_mask);

    Rng rng(0);  // shapes only; the checkpoint overwrites every value
    ModelParams model = ModelParams::create(
        static_cast<std::size_t>(meta_value("account_feature_dim")),
        static_cast<std::size_t>(meta_value("tx_attribute_dim")),
        config.train.embed_dim, config.train.layer_count, rng);
    ParamMap params = model.collect();
    load_checkpoint(params, checkpoint_path);

    const Tensor embeddings = encode(data.graph, model.encoder);
    const DetectionMatrix detection = classify(embeddings, model.classifier);
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
    if (test_truth.empty()) throw ConfigError("eval: test mask is empty");

    ExperimentResult result;
    result.dataset_id = data.id;
    result.mode = "eval";
    result.metrics.confusion = confusion(test_pred, test_truth);
    result.metrics.precision = precision(result.metrics.confusion);
    result.metrics.recall = recall(result.metrics.confusion);
    result.metrics.f1 = f1_score(test_pred, test_truth);
    result.metrics.auc = auc(test_scores, test_truth);
    result.metrics.dataset_id = data.id;
    result.metrics.config_hash = config_hash(config);
    result.metrics.seed = config.train.seed;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    const std::filesystem::path dir = prepare_output(config);
    write_text(dir / "eval_report.json", report_json(config, result, seconds));
    std::cout << "f1=" << result.metrics.f1 << " auc=" << result.metrics.auc
              << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
    ExperimentConfig config = build_config(args, /*seed_required=*/false);
    if (config.label_ratios.empty())
        config.label_ratios = {0.1, 0.3, 0.5, 0.7, 0.9};
    const std::vector<SweepRow> rows = label_ratio_sweep(config);
    const std::filesystem::path dir = prepare_output(config);
    write_sweep_csv(rows, dir / "sweep.csv");
    for (const SweepRow& row : rows)
        std::cout << "ratio=" << row.ratio << " f1=" << row.f1
                  << " auc=" << row.auc << "\n";
    return kExitOk;
}

int cmd_ablate(const CommonArgs& args) {
    const ExperimentConfig config = build_config(args, /*seed_required=*/false);
    const std::vector<AblationRow> rows = ablation_group_source(config);
    const std::filesystem::path dir = prepare_output(config);
    write_text(dir / "ablation.json", ablation_json(config, rows));
    for (const AblationRow& row : rows)
        std::cout << row.group_source << ": f1=" << row.metrics.f1
                  << " auc=" << row.metrics.auc << " (" << row.mode << ")\n";
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool seed_required) {
    cmd->add_option("-c,--config", args.config_path, "flat key/value config file");
    cmd->add_option("--set", args.overrides, "override a config key (key=value)")
        ->take_all();
    auto* seed = cmd->add_option("--seed", args.seed, "run seed");
    if (seed_required) seed->required();
    cmd->add_option("-o,--out", args.output_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transaction-graph laundering detection toolkit"};
    app.require_subcommand(1);

    CommonArgs generate_args, train_args, eval_args, sweep_args, ablate_args;
    std::string checkpoint_path;

    CLI::App* generate = app.add_subcommand(
        "generate", "emit a synthetic benchmark as CSV files");
    add_common(generate, generate_args, true);

    CLI::App* train_cmd =
        app.add_subcommand("train", "train a model and save a checkpoint");
    add_common(train_cmd, train_args, true);

    CLI::App* eval_cmd =
        app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    add_common(eval_cmd, eval_args, false);
    eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")
        ->required();

    CLI::App* sweep =
        app.add_subcommand("sweep", "train/evaluate across label ratios");
    add_common(sweep, sweep_args, false);

    CLI::App* ablate =
        app.add_subcommand("ablate", "compare group sources (none/native/modularity)");
    add_common(ablate, ablate_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(generate_args);
        if (train_cmd->parsed()) return cmd_train(train_args);
        if (eval_cmd->parsed()) return cmd_eval(eval_args, checkpoint_path);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (ablate->parsed()) return cmd_ablate(ablate_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
