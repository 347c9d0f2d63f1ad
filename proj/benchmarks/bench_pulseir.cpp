#include <pulseir/pulseir.hpp>

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

using namespace pulseir;

namespace {

// n sines of 200 ns on a shared 10 MHz reference clock.
Waveform sine_train(int n)
{
    Waveform clk = clock(10e6, 0.0);
    std::vector<Waveform> items;
    items.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        items.push_back(sine(0.5 + 0.01 * (i % 7), 10e6 + 1e3 * i, 0.1 * i, 200e-9, clk));
    return sequence(items);
}

// Left-leaning chain of n sums over alternating numbers and variables.
Scalar scalar_chain(int n)
{
    Scalar acc = var("x0");
    for (int i = 1; i < n; ++i)
        acc = (i % 2) ? acc + Scalar(1.0) * var("x" + std::to_string(i % 8)) : acc - Scalar(0.0);
    return acc;
}

Bindings chain_bindings()
{
    Bindings b;
    for (int i = 0; i < 8; ++i)
        b["x" + std::to_string(i)] = 0.25 * i;
    return b;
}

} // namespace

static void BM_RenderSineTrain(benchmark::State &state)
{
    Waveform w = sine_train(static_cast<int>(state.range(0)));
    std::size_t samples = 0;
    for (auto _ : state) {
        SampleBlock block = render(w, 1e9);
        samples += block.values.size();
        benchmark::DoNotOptimize(block.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(samples));
}
BENCHMARK(BM_RenderSineTrain)->RangeMultiplier(4)->Range(4, 256);

static void BM_RenderModulated(benchmark::State &state)
{
    Scalar d = 2e-6;
    Waveform fm = sine_fm(clock(10e6, 0.0), triangle(1e6, d), gaussian(1.0, 300e-9, d), 0.0, d);
    for (auto _ : state) {
        SampleBlock block = render(fm, 1e9);
        benchmark::DoNotOptimize(block.values.data());
    }
}
BENCHMARK(BM_RenderModulated);

static void BM_MunchDds(benchmark::State &state)
{
    Waveform w = sine_train(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto segments = munch_dds(w);
        benchmark::DoNotOptimize(segments.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MunchDds)->RangeMultiplier(4)->Range(4, 1024);

static void BM_Synthesize(benchmark::State &state)
{
    auto segments = munch_dds(sine_train(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        SampleBlock block = synthesize(segments, 1e9);
        benchmark::DoNotOptimize(block.values.data());
    }
}
BENCHMARK(BM_Synthesize)->Arg(64);

static void BM_FoldSimplifyChain(benchmark::State &state)
{
    NodePtr graph = scalar_chain(static_cast<int>(state.range(0))).node();
    Pipeline p = parse_pipeline("substitute,fold,simplify", chain_bindings());
    for (auto _ : state) {
        PassResult r = p.run(graph);
        benchmark::DoNotOptimize(r.graph.get());
    }
}
BENCHMARK(BM_FoldSimplifyChain)->RangeMultiplier(4)->Range(16, 4096);

static void BM_ValidateSineTrain(benchmark::State &state)
{
    NodePtr graph = sine_train(static_cast<int>(state.range(0))).node();
    Pipeline p = parse_pipeline("validate");
    for (auto _ : state) {
        PassResult r = p.run(graph);
        benchmark::DoNotOptimize(r.graph.get());
    }
}
BENCHMARK(BM_ValidateSineTrain)->Arg(256);

static void BM_PipelinePerChannel(benchmark::State &state)
{
    applications::Shelving app = applications::shelving();
    Pipeline p = parse_pipeline("fold,simplify,expand,validate");
    bool concurrent = state.range(0) != 0;
    for (auto _ : state) {
        auto results = p.run(app.schedule, concurrent);
        benchmark::DoNotOptimize(results.data());
    }
}
BENCHMARK(BM_PipelinePerChannel)->Arg(0)->Arg(1)->ArgNames({"concurrent"});

static void BM_JsonRoundTrip(benchmark::State &state)
{
    NodePtr graph = sine_train(static_cast<int>(state.range(0))).node();
    for (auto _ : state) {
        NodePtr back = parse_node(node_to_json(graph));
        benchmark::DoNotOptimize(back.get());
    }
}
BENCHMARK(BM_JsonRoundTrip)->Arg(64);

BENCHMARK_MAIN();
