#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amlgraph/graph.hpp"

namespace amlgraph {

/// Knobs for the synthetic benchmarks. Defaults give the multi-gang
/// crowdsourcing benchmark used by the acceptance experiments: three payout
/// pyramids with collector back-flows, benign hub structures that imitate
/// the payout fan-out (but carry no delegation relation), benign delegation
/// clusters with internal mesh traffic, and uniform background commerce.
struct SynthConfig {
    std::uint64_t seed = 0;

    // Crowdsourcing (multi-gang) scenario.
    std::size_t gang_count = 3;
    std::size_t pyramid_depth = 2;    // agent levels under each boss
    std::size_t pyramid_fanout = 3;   // subordinates per agent
    std::size_t labor_per_agent = 8;  // laborers paid by each leaf agent
    std::size_t collectors_per_gang = 2;
    double cross_gang_sharing = 0.15;  // chance a laborer moonlights for another gang

    std::size_t background_account_count = 1200;
    double background_tx_rate = 3.0;  // background transactions per account
    std::size_t mimic_hub_count = 12;       // payout look-alikes, never grouped
    std::size_t benign_cluster_count = 8;   // delegation clusters, never laundering
    std::size_t benign_cluster_size = 8;

    std::size_t account_feature_count = 4;  // uninformative standard normals

    // Attribute distributions.
    double amount_mu = 4.0;          // log-normal location of background amounts
    double amount_sigma = 1.2;       // background spread
    double payout_sigma = 0.25;      // per-structure payout spread (tight)
    double time_window = 1e6;        // timestamps drawn in [0, time_window)
    double burst_width = 0.02;       // structured bursts span this fraction of it

    // Hacker (layered) scenario.
    std::size_t layer_count = 3;
    std::size_t layer_width = 2;
};

struct SynthResult {
    TransactionGraph graph;
    LabelSet labels;  // every transaction labeled; masks left empty
    std::vector<std::pair<AccountId, AccountId>> relation_edges;
    GroupPartition groups;  // components of relation_edges
};

/// Multi-gang crowdsourcing benchmark. Laundering edges: boss->agent chains,
/// leaf-agent->laborer payouts, laborer->collector forwards, and cross-gang
/// moonlighting payouts. Delegation relation edges span each gang plus the
/// benign clusters, so the group task is correlated with — but distinct
/// from — the laundering task. Deterministic per seed. Throws ConfigError
/// when the configuration leaves the group vector degenerate (every
/// transaction in-group).
SynthResult gen_crowdsourcing(const SynthConfig& config);

/// Layered hacker benchmark: one source fanning through layer_count levels
/// of layer_width accounts (complete bipartite between levels), all chain
/// edges labeled, plus background commerce. No relation edges are emitted:
/// the scenario has no group information.
SynthResult gen_hacker(const SynthConfig& config);

/// JSON manifest describing a generated dataset: the configuration, the
/// scenario name, and ground-truth summary counts.
std::string manifest_json(const SynthConfig& config, const SynthResult& result,
                          const std::string& scenario);

}  // namespace amlgraph
