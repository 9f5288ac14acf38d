// Microbenchmarks for the pieces that dominate training time: the forward
// encoding, the backward sweep, subgraph batching, and the graph utilities.
// All inputs come from the default synthetic benchmark so timings track the
// workload the acceptance experiments run.
#include <benchmark/benchmark.h>

#include <vector>

#include "amlgraph/batching.hpp"
#include "amlgraph/community.hpp"
#include "amlgraph/encoder.hpp"
#include "amlgraph/graph.hpp"
#include "amlgraph/model.hpp"
#include "amlgraph/synth.hpp"
#include "amlgraph/tensor.hpp"

using namespace amlgraph;

namespace {

const SynthResult& dataset() {
    static const SynthResult data = [] {
        SynthConfig config;
        config.seed = 1;
        return gen_crowdsourcing(config);
    }();
    return data;
}

ModelParams& model(std::size_t embed_dim) {
    static std::size_t cached_dim = 0;
    static ModelParams params;
    if (cached_dim != embed_dim) {
        Rng rng(7);
        params = ModelParams::create(dataset().graph.account_feature_dim,
                                     dataset().graph.tx_attribute_dim, embed_dim,
                                     2, rng);
        cached_dim = embed_dim;
    }
    return params;
}

}  // namespace

static void BM_generate(benchmark::State& state) {
    SynthConfig config;
    config.seed = 1;
    for (auto _ : state) {
        const SynthResult data = gen_crowdsourcing(config);
        benchmark::DoNotOptimize(data.graph.transaction_count());
    }
}
BENCHMARK(BM_generate)->Unit(benchmark::kMillisecond);

static void BM_encode_forward(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    ModelParams& params = model(dim);
    for (auto _ : state) {
        const Tensor embeddings = encode(dataset().graph, params.encoder);
        benchmark::DoNotOptimize(embeddings.values().data());
    }
    state.SetItemsProcessed(state.iterations() *
                            dataset().graph.transaction_count());
}
BENCHMARK(BM_encode_forward)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_forward_backward(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    ModelParams& params = model(dim);
    const SynthResult& data = dataset();
    std::vector<std::uint8_t> mask(data.graph.transaction_count(), 1);
    for (auto _ : state) {
        const Tensor embeddings = encode(data.graph, params.encoder);
        const DetectionMatrix detection = classify(embeddings, params.classifier);
        const Tensor loss = total_loss(
            laundering_loss(detection, data.labels.laundering, mask, 1.0, 1.0),
            group_loss(detection, build_group_vector(data.graph, data.groups).bits,
                       true),
            0.5);
        backward(loss);
        benchmark::DoNotOptimize(loss.scalar_value());
    }
}
BENCHMARK(BM_forward_backward)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_batching(benchmark::State& state) {
    const std::size_t batches = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const auto out = sample_subgraph_batches(dataset().graph, batches, 3);
        benchmark::DoNotOptimize(out.size());
    }
}
BENCHMARK(BM_batching)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_components(benchmark::State& state) {
    for (auto _ : state) {
        const GroupPartition groups =
            weakly_connected_components(dataset().relation_edges);
        benchmark::DoNotOptimize(groups.group_count());
    }
}
BENCHMARK(BM_components);

static void BM_group_vector(benchmark::State& state) {
    for (auto _ : state) {
        const GroupVector bits =
            build_group_vector(dataset().graph, dataset().groups);
        benchmark::DoNotOptimize(bits.count_ones());
    }
}
BENCHMARK(BM_group_vector);

static void BM_modularity_groups(benchmark::State& state) {
    for (auto _ : state) {
        const GroupPartition groups = derive_groups_modularity(dataset().graph, 3);
        benchmark::DoNotOptimize(groups.group_count());
    }
}
BENCHMARK(BM_modularity_groups)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
