#include <benchmark/benchmark.h>

#include "evoforge/decomposer.hpp"
#include "evoforge/metrics.hpp"
#include "evoforge/sampler.hpp"
#include "evoforge/scorer.hpp"
#include "evoforge/seeder.hpp"

using namespace evoforge;

namespace {

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim,
                                               std::uint64_t seed) {
    Rng rng = make_rng(seed, {1});
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<std::vector<double>> points(n, std::vector<double>(dim));
    for (auto& p : points) {
        for (auto& x : p) x = coord(rng);
    }
    return points;
}

SeedPool scored_pool(int n, std::uint64_t seed) {
    SeedPool pool(seed);
    Rng rng = make_rng(seed, {2});
    std::uniform_real_distribution<double> u_pick(0.05, 1.0);
    for (int i = 0; i < n; ++i) {
        InstructionRecord rec;
        rec.id = "r" + std::to_string(i);
        rec.text = "Benchmark instruction " + std::to_string(i) + " with several words.";
        rec.root_domain = static_cast<RootDomain>(i % 3);
        rec.status = RecordStatus::Viable;
        DecomposedElements e;
        e.objectives = {"objective"};
        rec.elements = e;
        rec.objective_count = 1;
        rec.uncertainty = u_pick(rng);
        pool.insert(rec);
    }
    return pool;
}

const char* kReply =
    "**Extract Background Settings:**\n1.The user needs to pick up his son.\n\n"
    "**Extract Objectives:**\n1.Write an SMS.\n\n"
    "**Extract Constraints:**\n1.The SMS should be short.\n2.It should be polite.\n";

}  // namespace

static void bm_diversity_variance(benchmark::State& state) {
    auto points = random_points(static_cast<std::size_t>(state.range(0)), 8, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(diversity_variance(points));
    }
}
BENCHMARK(bm_diversity_variance)->Arg(100)->Arg(500);

static void bm_kmeans_elbow(benchmark::State& state) {
    auto points = random_points(200, 8, 11);
    for (auto _ : state) {
        Rng rng = make_rng(11, {3});
        benchmark::DoNotOptimize(cluster_source("bench", points, {1, 8}, rng));
    }
}
BENCHMARK(bm_kmeans_elbow);

static void bm_fusion_pair_sampling(benchmark::State& state) {
    SeedPool pool = scored_pool(static_cast<int>(state.range(0)), 13);
    RoundPlan plan;
    plan.m_fusion = 16;
    for (auto _ : state) {
        Rng rng = make_rng(13, {4});
        benchmark::DoNotOptimize(sample_fusion_pairs(pool, plan, rng));
    }
}
BENCHMARK(bm_fusion_pair_sampling)->Arg(64)->Arg(256);

static void bm_depth_sampling(benchmark::State& state) {
    SeedPool pool = scored_pool(256, 17);
    RoundPlan plan;
    plan.m_depth = 16;
    for (auto _ : state) {
        Rng rng = make_rng(17, {5});
        benchmark::DoNotOptimize(sample_depth_candidates(pool, plan, rng));
    }
}
BENCHMARK(bm_depth_sampling);

static void bm_parse_decomposition(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_decomposition(kReply));
    }
}
BENCHMARK(bm_parse_decomposition);

static void bm_build_decomposition_prompt(benchmark::State& state) {
    std::string instruction = "Summarize the attached report in five bullet points.";
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_decomposition_prompt(instruction));
    }
}
BENCHMARK(bm_build_decomposition_prompt);

static void bm_perturb(benchmark::State& state) {
    PerturbationConfig config;
    config.rng_seed = 23;
    std::string instruction =
        "carefully rewrite this long instruction so that every word matters a great deal";
    int draw = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(perturb(instruction, config, ++draw));
    }
}
BENCHMARK(bm_perturb);

BENCHMARK_MAIN();
