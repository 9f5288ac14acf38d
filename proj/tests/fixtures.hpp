// Small hand-built datasets shared between the unit suites and the
// acceptance gate.
#pragma once

#include <cstdint>
#include <string>

#include "amlgraph/graph.hpp"
#include "amlgraph/rng.hpp"

namespace fixtures {

struct Toy {
    amlgraph::TransactionGraph graph;
    amlgraph::LabelSet labels;        // everything train-masked
    amlgraph::GroupVector groups;     // halves {0..3} and {4..7}
};

// 8 accounts, 40 transactions, linearly separable by the first attribute:
// positives sit near +2, negatives near -2. Labels alternate, so both
// classes have 20 members and the derived class weights are 1.
inline Toy separable_toy(std::uint64_t seed = 1) {
    using namespace amlgraph;
    Rng rng(seed);
    Toy toy;
    TransactionGraph& g = toy.graph;
    for (int i = 0; i < 8; ++i) g.account_labels.push_back("r" + std::to_string(i));
    g.account_feature_dim = 1;
    for (int i = 0; i < 8; ++i) g.account_features.push_back(rng.normal(0.0, 0.1));
    g.tx_attribute_dim = 2;
    for (std::uint32_t i = 0; i < 40; ++i) {
        const AccountId src = i % 8;
        const AccountId dst = (i + 3) % 8;
        const std::int8_t label = static_cast<std::int8_t>(i % 2);
        g.tx_src.push_back(src);
        g.tx_dst.push_back(dst);
        g.tx_attributes.push_back((label ? 2.0 : -2.0) + rng.normal(0.0, 0.1));
        g.tx_attributes.push_back(rng.normal(0.0, 0.1));
        toy.labels.laundering.push_back(label);
    }
    g.finalize();
    toy.labels.train_mask.assign(40, 1);
    toy.labels.test_mask.assign(40, 0);

    GroupPartition halves;
    halves.groups = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    toy.groups = build_group_vector(g, halves);
    return toy;
}

}  // namespace fixtures
