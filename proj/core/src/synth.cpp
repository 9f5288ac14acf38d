#include "amlgraph/synth.hpp"

#include <cmath>
#include <string>

#include "amlgraph/errors.hpp"
#include "amlgraph/rng.hpp"
#include "json.hpp"

namespace amlgraph {

namespace {

// Accumulates accounts and transactions, then assembles the graph pieces.
struct GraphBuilder {
    TransactionGraph graph;
    std::vector<std::int8_t> labels;
    std::vector<std::pair<AccountId, AccountId>> relation_edges;

    AccountId add_account(std::string label) {
        graph.account_labels.push_back(std::move(label));
        return static_cast<AccountId>(graph.account_labels.size() - 1);
    }

    void add_tx(AccountId src, AccountId dst, double amount, double timestamp,
                double fee, double token, std::int8_t label) {
        graph.tx_src.push_back(src);
        graph.tx_dst.push_back(dst);
        graph.tx_attributes.insert(graph.tx_attributes.end(),
                                   {amount, timestamp, fee, token});
        labels.push_back(label);
    }

    void delegate(AccountId a, AccountId b) { relation_edges.emplace_back(a, b); }
};

void validate(const SynthConfig& c, bool hacker) {
    if (c.cross_gang_sharing < 0.0 || c.cross_gang_sharing > 1.0)
        throw ConfigError("synth: cross_gang_sharing outside [0, 1]");
    if (!(c.time_window > 0.0) || c.burst_width < 0.0 || c.burst_width > 1.0)
        throw ConfigError("synth: bad time window configuration");
    if (c.amount_sigma < 0.0 || c.payout_sigma < 0.0)
        throw ConfigError("synth: amount spreads must be non-negative");
    if (c.background_tx_rate < 0.0)
        throw ConfigError("synth: background_tx_rate must be non-negative");
    if (c.background_tx_rate > 0.0 && c.background_account_count < 2)
        throw ConfigError("synth: background traffic needs at least 2 accounts");
    if (hacker) {
        if (c.layer_count < 1 || c.layer_width < 1)
            throw ConfigError("synth: layer_count and layer_width must be >= 1");
    } else {
        if (c.gang_count < 1 || c.pyramid_depth < 1 || c.pyramid_fanout < 1 ||
            c.labor_per_agent < 1 || c.collectors_per_gang < 1)
            throw ConfigError("synth: gang structure counts must be >= 1");
        if (c.benign_cluster_count > 0 && c.benign_cluster_size < 2)
            throw ConfigError("synth: benign clusters need at least 2 members");
    }
}

double burst_time(const SynthConfig& c, double center, Rng& rng) {
    return center + rng.uniform(-0.5, 0.5) * c.burst_width * c.time_window;
}

double fee_for(double amount, Rng& rng) {
    return amount * rng.uniform(0.0005, 0.002);
}

// Hub-and-spoke payout tree: root pays `fanout` relays, each relay pays
// `spokes` receivers with tight per-structure amounts inside one time burst.
// Shared by the benign look-alikes; gangs add depth, collectors and
// delegation on top of the same shape.
struct PayoutAmounts {
    double base;    // per-receiver payout scale
    double center;  // burst center
};

PayoutAmounts draw_payout_profile(const SynthConfig& c, Rng& rng) {
    return {rng.lognormal(c.amount_mu, c.amount_sigma),
            rng.uniform(0.1, 0.9) * c.time_window};
}

void finish(GraphBuilder& b, const SynthConfig& c, SynthResult& out,
            bool expect_groups) {
    Rng feature_rng(Rng(c.seed).derive(0xfeed));
    b.graph.account_feature_dim = c.account_feature_count;
    b.graph.account_features.reserve(b.graph.account_labels.size() *
                                     c.account_feature_count);
    for (std::size_t i = 0; i < b.graph.account_labels.size(); ++i)
        for (std::size_t j = 0; j < c.account_feature_count; ++j)
            b.graph.account_features.push_back(feature_rng.normal());

    b.graph.tx_attribute_dim = 4;
    b.graph.finalize();

    out.labels.laundering = std::move(b.labels);
    out.labels.train_mask.assign(out.labels.laundering.size(), 0);
    out.labels.test_mask.assign(out.labels.laundering.size(), 0);
    out.relation_edges = std::move(b.relation_edges);
    out.groups = weakly_connected_components(out.relation_edges);
    out.graph = std::move(b.graph);

    if (expect_groups) {
        const GroupVector gv = build_group_vector(out.graph, out.groups);
        if (gv.degenerate)
            throw ConfigError(
                "synth: configuration puts every transaction in-group; the "
                "group vector would be degenerate");
    }
}

void add_background(GraphBuilder& b, const SynthConfig& c, Rng& rng) {
    std::vector<AccountId> pool;
    pool.reserve(c.background_account_count);
    for (std::size_t i = 0; i < c.background_account_count; ++i)
        pool.push_back(b.add_account("bg-" + std::to_string(i)));

    const auto tx_count = static_cast<std::size_t>(std::llround(
        c.background_tx_rate * static_cast<double>(c.background_account_count)));
    for (std::size_t i = 0; i < tx_count; ++i) {
        const AccountId src = pool[rng.uniform_int(pool.size())];
        AccountId dst = pool[rng.uniform_int(pool.size())];
        while (dst == src) dst = pool[rng.uniform_int(pool.size())];
        const double amount = rng.lognormal(c.amount_mu, c.amount_sigma);
        b.add_tx(src, dst, amount, rng.uniform(0.0, c.time_window),
                 fee_for(amount, rng),
                 static_cast<double>(rng.uniform_int(3)), 0);
    }
}

}  // namespace

SynthResult gen_crowdsourcing(const SynthConfig& c) {
    validate(c, /*hacker=*/false);
    GraphBuilder b;
    Rng rng(c.seed);

    std::vector<std::vector<AccountId>> gang_leaves(c.gang_count);
    std::vector<std::vector<AccountId>> gang_laborers(c.gang_count);
    std::vector<PayoutAmounts> gang_profile(c.gang_count);

    for (std::size_t g = 0; g < c.gang_count; ++g) {
        const std::string tag = "g" + std::to_string(g);
        const PayoutAmounts profile = draw_payout_profile(c, rng);
        gang_profile[g] = profile;

        const AccountId boss = b.add_account(tag + "-boss");
        std::vector<AccountId> collectors;
        for (std::size_t j = 0; j < c.collectors_per_gang; ++j) {
            collectors.push_back(b.add_account(tag + "-c" + std::to_string(j)));
            b.delegate(boss, collectors.back());
        }

        // Funds cascade down the agent pyramid; every hop keeps amounts
        // proportional to the laborers it ultimately serves.
        std::vector<AccountId> level = {boss};
        std::size_t agent_idx = 0;
        for (std::size_t depth = 1; depth <= c.pyramid_depth; ++depth) {
            const double downstream = static_cast<double>(c.labor_per_agent) *
                                      std::pow(static_cast<double>(c.pyramid_fanout),
                                               static_cast<double>(c.pyramid_depth - depth));
            std::vector<AccountId> next;
            for (AccountId parent : level) {
                for (std::size_t f = 0; f < c.pyramid_fanout; ++f) {
                    const AccountId child =
                        b.add_account(tag + "-a" + std::to_string(agent_idx++));
                    b.delegate(parent, child);
                    const double amount = profile.base * downstream *
                                          rng.lognormal(0.0, c.payout_sigma);
                    b.add_tx(parent, child, amount, burst_time(c, profile.center, rng),
                             fee_for(amount, rng), 1.0, 1);
                    next.push_back(child);
                }
            }
            level = std::move(next);
        }
        gang_leaves[g] = level;

        std::size_t labor_idx = 0;
        for (AccountId leaf : level) {
            for (std::size_t j = 0; j < c.labor_per_agent; ++j) {
                const AccountId laborer =
                    b.add_account(tag + "-l" + std::to_string(labor_idx++));
                b.delegate(leaf, laborer);
                gang_laborers[g].push_back(laborer);

                const double payout =
                    profile.base * rng.lognormal(0.0, c.payout_sigma);
                b.add_tx(leaf, laborer, payout, burst_time(c, profile.center, rng),
                         fee_for(payout, rng), 1.0, 1);
                // The laborer forwards the payout (minus a cut) to a collector.
                const AccountId sink = collectors[rng.uniform_int(collectors.size())];
                const double forwarded = payout * rng.uniform(0.85, 0.98);
                b.add_tx(laborer, sink, forwarded, burst_time(c, profile.center, rng),
                         fee_for(forwarded, rng), 1.0, 1);
            }
        }
        for (AccountId collector : collectors) {
            const double settled = profile.base *
                                   static_cast<double>(gang_laborers[g].size()) *
                                   rng.uniform(0.8, 0.95) /
                                   static_cast<double>(collectors.size());
            b.add_tx(collector, boss, settled, burst_time(c, profile.center, rng),
                     fee_for(settled, rng), 1.0, 1);
        }
    }

    // Moonlighting: a laborer occasionally takes payouts from another gang's
    // leaf agent. The edge is laundering but crosses group boundaries.
    if (c.gang_count > 1 && c.cross_gang_sharing > 0.0) {
        for (std::size_t g = 0; g < c.gang_count; ++g) {
            for (AccountId laborer : gang_laborers[g]) {
                if (rng.uniform() >= c.cross_gang_sharing) continue;
                std::size_t other = rng.uniform_int(c.gang_count - 1);
                if (other >= g) ++other;
                const auto& leaves = gang_leaves[other];
                const AccountId leaf = leaves[rng.uniform_int(leaves.size())];
                const double payout = gang_profile[other].base *
                                      rng.lognormal(0.0, c.payout_sigma);
                b.add_tx(leaf, laborer, payout,
                         burst_time(c, gang_profile[other].center, rng),
                         fee_for(payout, rng), 1.0, 1);
            }
        }
    }

    // Benign delegation clusters: grouped accounts whose internal traffic is
    // ordinary commerce (ring plus a few shortcuts), so in-group does not
    // imply laundering.
    for (std::size_t k = 0; k < c.benign_cluster_count; ++k) {
        const std::string tag = "bc" + std::to_string(k);
        std::vector<AccountId> members;
        for (std::size_t j = 0; j < c.benign_cluster_size; ++j)
            members.push_back(b.add_account(tag + "-" + std::to_string(j)));
        for (std::size_t j = 1; j < members.size(); ++j)
            b.delegate(members[0], members[j]);
        for (std::size_t j = 0; j < members.size(); ++j) {
            const AccountId src = members[j];
            const AccountId dst = members[(j + 1) % members.size()];
            const double amount = rng.lognormal(c.amount_mu, c.amount_sigma);
            b.add_tx(src, dst, amount, rng.uniform(0.0, c.time_window),
                     fee_for(amount, rng),
                     static_cast<double>(rng.uniform_int(3)), 0);
        }
        for (std::size_t j = 0; j < members.size() / 2; ++j) {
            const AccountId src = members[rng.uniform_int(members.size())];
            AccountId dst = members[rng.uniform_int(members.size())];
            while (dst == src) dst = members[rng.uniform_int(members.size())];
            const double amount = rng.lognormal(c.amount_mu, c.amount_sigma);
            b.add_tx(src, dst, amount, rng.uniform(0.0, c.time_window),
                     fee_for(amount, rng),
                     static_cast<double>(rng.uniform_int(3)), 0);
        }
    }

    // Benign payout look-alikes (cashback / affiliate style): the same burst
    // fan-out as a gang, and the spokes even kick a platform fee back through
    // aggregators to the hub. The loop mirrors the laundering money flow; the
    // tell is the missing middle pyramid level and the amount scales, never a
    // delegation relation. These are the hard negatives.
    for (std::size_t h = 0; h < c.mimic_hub_count; ++h) {
        const std::string tag = "mh" + std::to_string(h);
        const PayoutAmounts profile = draw_payout_profile(c, rng);
        const AccountId hub = b.add_account(tag);
        std::vector<AccountId> aggregators;
        for (std::size_t j = 0; j < c.collectors_per_gang; ++j)
            aggregators.push_back(b.add_account(tag + "-x" + std::to_string(j)));
        std::size_t spokes = 0;
        for (std::size_t f = 0; f < c.pyramid_fanout; ++f) {
            const AccountId relay =
                b.add_account(tag + "-r" + std::to_string(f));
            const double amount = profile.base *
                                  static_cast<double>(c.labor_per_agent) *
                                  rng.lognormal(0.0, c.payout_sigma);
            b.add_tx(hub, relay, amount, burst_time(c, profile.center, rng),
                     fee_for(amount, rng), 1.0, 0);
            for (std::size_t j = 0; j < c.labor_per_agent; ++j) {
                const AccountId spoke = b.add_account(
                    tag + "-r" + std::to_string(f) + "-p" + std::to_string(j));
                const double payout =
                    profile.base * rng.lognormal(0.0, c.payout_sigma);
                b.add_tx(relay, spoke, payout, burst_time(c, profile.center, rng),
                         fee_for(payout, rng), 1.0, 0);
                const AccountId agg =
                    aggregators[rng.uniform_int(aggregators.size())];
                const double fee_back = payout * rng.uniform(0.85, 0.98);
                b.add_tx(spoke, agg, fee_back, burst_time(c, profile.center, rng),
                         fee_for(fee_back, rng), 1.0, 0);
                ++spokes;
            }
        }
        for (AccountId agg : aggregators) {
            const double settled = profile.base * static_cast<double>(spokes) *
                                   rng.uniform(0.8, 0.95) /
                                   static_cast<double>(aggregators.size());
            b.add_tx(agg, hub, settled, burst_time(c, profile.center, rng),
                     fee_for(settled, rng), 1.0, 0);
        }
    }

    add_background(b, c, rng);

    SynthResult out;
    finish(b, c, out, /*expect_groups=*/true);
    return out;
}

SynthResult gen_hacker(const SynthConfig& c) {
    validate(c, /*hacker=*/true);
    GraphBuilder b;
    Rng rng(c.seed);

    const PayoutAmounts profile = draw_payout_profile(c, rng);
    const double source_amount =
        profile.base * static_cast<double>(c.layer_width) *
        static_cast<double>(c.layer_count);

    const AccountId source = b.add_account("hk-src");
    std::vector<AccountId> level = {source};
    for (std::size_t l = 0; l < c.layer_count; ++l) {
        std::vector<AccountId> next;
        for (std::size_t w = 0; w < c.layer_width; ++w)
            next.push_back(b.add_account("hk-" + std::to_string(l) + "-" +
                                         std::to_string(w)));
        // Each hop happens strictly after the previous layer's burst.
        const double hop_center =
            profile.center +
            static_cast<double>(l) * c.burst_width * c.time_window;
        const double share = source_amount /
                             std::pow(static_cast<double>(c.layer_width),
                                      static_cast<double>(l + 1));
        for (AccountId from : level)
            for (AccountId to : next) {
                const double amount = share * rng.lognormal(0.0, c.payout_sigma);
                b.add_tx(from, to, amount, burst_time(c, hop_center, rng),
                         fee_for(amount, rng), 1.0, 1);
            }
        level = std::move(next);
    }

    add_background(b, c, rng);

    SynthResult out;
    finish(b, c, out, /*expect_groups=*/false);
    return out;
}

std::string manifest_json(const SynthConfig& c, const SynthResult& result,
                          const std::string& scenario) {
    nlohmann::ordered_json j;
    j["scenario"] = scenario;
    nlohmann::ordered_json cfg;
    cfg["seed"] = c.seed;
    cfg["gang_count"] = c.gang_count;
    cfg["pyramid_depth"] = c.pyramid_depth;
    cfg["pyramid_fanout"] = c.pyramid_fanout;
    cfg["labor_per_agent"] = c.labor_per_agent;
    cfg["collectors_per_gang"] = c.collectors_per_gang;
    cfg["cross_gang_sharing"] = c.cross_gang_sharing;
    cfg["background_account_count"] = c.background_account_count;
    cfg["background_tx_rate"] = c.background_tx_rate;
    cfg["mimic_hub_count"] = c.mimic_hub_count;
    cfg["benign_cluster_count"] = c.benign_cluster_count;
    cfg["benign_cluster_size"] = c.benign_cluster_size;
    cfg["account_feature_count"] = c.account_feature_count;
    cfg["amount_mu"] = c.amount_mu;
    cfg["amount_sigma"] = c.amount_sigma;
    cfg["payout_sigma"] = c.payout_sigma;
    cfg["time_window"] = c.time_window;
    cfg["burst_width"] = c.burst_width;
    cfg["layer_count"] = c.layer_count;
    cfg["layer_width"] = c.layer_width;
    j["config"] = cfg;

    std::size_t laundering = 0;
    for (std::int8_t l : result.labels.laundering) laundering += (l == 1);
    nlohmann::ordered_json summary;
    summary["accounts"] = result.graph.account_count();
    summary["transactions"] = result.graph.transaction_count();
    summary["laundering_transactions"] = laundering;
    summary["relation_edges"] = result.relation_edges.size();
    summary["groups"] = result.groups.group_count();
    if (!result.groups.groups.empty()) {
        const GroupVector gv = build_group_vector(result.graph, result.groups);
        summary["in_group_transactions"] = gv.count_ones();
    } else {
        summary["in_group_transactions"] = 0;
    }
    j["summary"] = summary;
    return j.dump(2) + "\n";
}

}  // namespace amlgraph
