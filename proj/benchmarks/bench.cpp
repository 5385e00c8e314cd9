#include <benchmark/benchmark.h>

#include <random>

#include "oge/baselines.hpp"
#include "oge/dfp.hpp"
#include "oge/env.hpp"
#include "oge/generators.hpp"
#include "oge/net.hpp"
#include "oge/replay.hpp"

namespace {

using namespace oge;

Graph bench_graph(std::uint64_t seed) { return generate({GraphFamily::grid, seed}); }

void BM_ShortestPath(benchmark::State& state) {
    Graph g = bench_graph(3);
    for (auto _ : state) {
        auto d = distances_from(g, 0);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_ShortestPath);

void BM_EpisodeDfs(benchmark::State& state) {
    Graph g = bench_graph(4);
    for (auto _ : state) {
        ExplorationState s(g, 0);
        while (!s.done()) s.step(select_dfs(s));
        benchmark::DoNotOptimize(s.total_length());
    }
}
BENCHMARK(BM_EpisodeDfs);

void BM_EpisodeNn(benchmark::State& state) {
    Graph g = bench_graph(4);
    for (auto _ : state) {
        ExplorationState s(g, 0);
        while (!s.done()) s.step(select_nn(s));
        benchmark::DoNotOptimize(s.total_length());
    }
}
BENCHMARK(BM_EpisodeNn);

void BM_Reconstruct(benchmark::State& state) {
    Graph g = bench_graph(5);
    ExplorationState s(g, 0);
    EpisodeRecorder rec;
    rec.on_reset(s);
    std::mt19937_64 rng(1);
    while (!s.done()) {
        auto f = s.frontier();
        s.step(f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)]);
        rec.on_step(s);
    }
    EpisodeRecord record = std::move(rec).finish();
    int mid = record.length() / 2;
    for (auto _ : state) {
        auto r = reconstruct(record, mid);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Reconstruct);

struct NetFixture {
    NetworkConfig cfg = standard_config(6);
    NetworkParams params = init_params<float>(cfg, 7);
    Obs obs;
    NetFixture() {
        Graph g = bench_graph(6);
        ExplorationState s(g, 0);
        std::mt19937_64 rng(2);
        FeatureOptions opts;
        FeatureHistory hist(opts);
        hist.push(s.view());
        for (int i = 0; i < g.num_nodes() / 2 && !s.done(); ++i) {
            auto f = s.frontier();
            s.step(f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)]);
            hist.push(s.view());
        }
        obs = make_obs(s.view(), hist.input(), static_cast<float>(s.exploration_rate()));
    }
};

void BM_Forward(benchmark::State& state) {
    NetFixture f;
    for (auto _ : state) {
        auto out = forward(f.obs, f.params);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Forward);

void BM_ForwardBackward(benchmark::State& state) {
    NetFixture f;
    for (auto _ : state) {
        ForwardTrace trace;
        auto out = forward(f.obs, f.params, &trace);
        Eigen::MatrixXf dout = Eigen::MatrixXf::Ones(out.rows(), out.cols());
        auto grads = backward(trace, f.params, dout);
        benchmark::DoNotOptimize(grads);
    }
}
BENCHMARK(BM_ForwardBackward);

void BM_AdamStep(benchmark::State& state) {
    NetFixture f;
    ForwardTrace trace;
    auto out = forward(f.obs, f.params, &trace);
    Eigen::MatrixXf dout = Eigen::MatrixXf::Ones(out.rows(), out.cols());
    NetworkParams grads = backward(trace, f.params, dout);
    AdamState adam = make_adam<float>(f.cfg);
    for (auto _ : state) {
        adam_step(f.params, grads, adam);
        benchmark::DoNotOptimize(f.params.rff_w1);
    }
}
BENCHMARK(BM_AdamStep);

}  // namespace

BENCHMARK_MAIN();
