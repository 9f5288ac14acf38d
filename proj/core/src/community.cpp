#include "amlgraph/community.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "amlgraph/rng.hpp"

namespace amlgraph {

namespace {

// Undirected weighted adjacency; a self-loop stores twice its weight on the
// diagonal so that degrees come out as plain row sums.
using WeightedAdjacency = std::vector<std::unordered_map<std::uint32_t, double>>;

WeightedAdjacency project_undirected(const TransactionGraph& graph) {
    WeightedAdjacency adj(graph.account_count());
    for (std::size_t i = 0; i < graph.transaction_count(); ++i) {
        const AccountId s = graph.tx_src[i], d = graph.tx_dst[i];
        if (s == d) {
            adj[s][s] += 2.0;
        } else {
            adj[s][d] += 1.0;
            adj[d][s] += 1.0;
        }
    }
    return adj;
}

std::vector<double> row_sums(const WeightedAdjacency& adj) {
    std::vector<double> degree(adj.size(), 0.0);
    for (std::size_t i = 0; i < adj.size(); ++i)
        for (const auto& [j, w] : adj[i]) degree[i] += w;
    return degree;
}

double modularity_of(const WeightedAdjacency& adj,
                     const std::vector<std::uint32_t>& community) {
    const std::vector<double> degree = row_sums(adj);
    const double two_m = std::accumulate(degree.begin(), degree.end(), 0.0);
    if (two_m == 0.0) return 0.0;

    std::unordered_map<std::uint32_t, double> internal, total;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        total[community[i]] += degree[i];
        for (const auto& [j, w] : adj[i])
            if (community[i] == community[j]) internal[community[i]] += w;
    }
    double q = 0.0;
    for (const auto& [c, tot] : total) {
        const auto it = internal.find(c);
        const double in = it == internal.end() ? 0.0 : it->second;
        q += in / two_m - (tot / two_m) * (tot / two_m);
    }
    return q;
}

// One local-moving sweep phase: nodes visited in the given order, each moved
// to the neighbor community with the best positive modularity gain. Repeats
// passes until a full pass makes no move.
bool local_moving(const WeightedAdjacency& adj, std::vector<std::uint32_t>& community,
                  const std::vector<std::uint32_t>& order) {
    const std::vector<double> degree = row_sums(adj);
    const double two_m = std::accumulate(degree.begin(), degree.end(), 0.0);
    if (two_m == 0.0) return false;

    std::vector<double> community_total(adj.size(), 0.0);
    for (std::size_t i = 0; i < adj.size(); ++i)
        community_total[community[i]] += degree[i];

    bool any_move = false;
    bool moved = true;
    for (int pass = 0; moved && pass < 100; ++pass) {
        moved = false;
        for (std::uint32_t node : order) {
            const std::uint32_t old_community = community[node];
            // Weight from node into each adjacent community (self excluded).
            std::unordered_map<std::uint32_t, double> link;
            for (const auto& [j, w] : adj[node])
                if (j != node) link[community[j]] += w;
            community_total[old_community] -= degree[node];

            // Gains are all relative to the node sitting alone, so comparing
            // candidates against the old community directly maximizes Q.
            std::uint32_t best = old_community;
            const auto old_link = link.find(old_community);
            double best_gain = (old_link == link.end() ? 0.0 : old_link->second) -
                               community_total[old_community] * degree[node] / two_m;
            for (const auto& [c, w] : link) {
                if (c == old_community) continue;
                const double gain = w - community_total[c] * degree[node] / two_m;
                if (gain > best_gain + 1e-12 ||
                    (gain > best_gain - 1e-12 && c < best)) {
                    best_gain = gain;
                    best = c;
                }
            }
            community_total[best] += degree[node];
            if (best != old_community) {
                community[node] = best;
                moved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

// Collapses communities into super-nodes, summing edge weights. Internal
// weights land on the diagonal from both endpoints, which matches the
// doubled self-loop convention.
WeightedAdjacency aggregate(const WeightedAdjacency& adj,
                            const std::vector<std::uint32_t>& community,
                            std::vector<std::uint32_t>& relabel) {
    relabel.assign(adj.size(), 0);
    std::unordered_map<std::uint32_t, std::uint32_t> dense;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        auto [it, inserted] =
            dense.emplace(community[i], static_cast<std::uint32_t>(dense.size()));
        relabel[i] = it->second;
    }
    WeightedAdjacency next(dense.size());
    for (std::size_t i = 0; i < adj.size(); ++i)
        for (const auto& [j, w] : adj[i]) next[relabel[i]][relabel[j]] += w;
    return next;
}

}  // namespace

double modularity(const TransactionGraph& graph, const GroupPartition& partition) {
    const WeightedAdjacency adj = project_undirected(graph);
    const auto member = partition.membership(graph.account_count());
    std::vector<std::uint32_t> community(graph.account_count());
    std::uint32_t next_singleton = static_cast<std::uint32_t>(partition.group_count());
    for (std::size_t i = 0; i < community.size(); ++i)
        community[i] = member[i] >= 0 ? static_cast<std::uint32_t>(member[i])
                                      : next_singleton++;
    return modularity_of(adj, community);
}

GroupPartition derive_groups_modularity(const TransactionGraph& graph,
                                        std::uint64_t seed) {
    const std::size_t n = graph.account_count();
    GroupPartition out;
    if (n == 0) return out;

    WeightedAdjacency adj = project_undirected(graph);
    // assignment[v] = current community of original account v, tracked
    // through every aggregation level.
    std::vector<std::uint32_t> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);

    Rng rng(seed);
    while (true) {
        std::vector<std::uint32_t> community(adj.size());
        std::iota(community.begin(), community.end(), 0);
        std::vector<std::uint32_t> order(adj.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);

        if (!local_moving(adj, community, order)) break;

        std::vector<std::uint32_t> relabel;  // current node -> super-node
        adj = aggregate(adj, community, relabel);
        for (std::size_t v = 0; v < n; ++v)
            assignment[v] = relabel[assignment[v]];
        if (adj.size() <= 1) break;
    }

    std::unordered_map<std::uint32_t, std::vector<AccountId>> buckets;
    for (std::size_t v = 0; v < n; ++v)
        buckets[assignment[v]].push_back(static_cast<AccountId>(v));
    for (auto& [c, members] : buckets) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        out.groups.push_back(std::move(members));
    }
    std::sort(out.groups.begin(), out.groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

GroupPartition filter_groups(const GroupPartition& partition, std::size_t min_size,
                             std::size_t max_size) {
    GroupPartition out;
    for (const auto& g : partition.groups)
        if (g.size() >= min_size && g.size() <= max_size) out.groups.push_back(g);
    return out;
}

}  // namespace amlgraph
