#include <benchmark/benchmark.h>

#include <random>

#include "sdmm/harness.hpp"
#include "sdmm/scheme.hpp"

namespace {

sdmm::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t q,
                           std::mt19937_64& rng) {
    sdmm::Matrix m(rows, cols);
    for (std::uint64_t& e : m.entries())
        e = rng() % q;
    return m;
}

const sdmm::SchemePlan& grid_plan() {
    static const sdmm::SchemePlan plan =
        sdmm::make_plan({2, 2, 2, 1}, sdmm::ServerCountChoice::minimal());
    return plan;
}

void BM_Encode(benchmark::State& state) {
    const auto& plan = grid_plan();
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 seed(1);
    const sdmm::Matrix a = random_matrix(dim, dim, plan.field().modulus(), seed);
    const sdmm::Matrix b = random_matrix(dim, dim, plan.field().modulus(), seed);
    for (auto _ : state) {
        sdmm::UniformFieldRng rng(7);
        benchmark::DoNotOptimize(sdmm::encode(a, b, plan, rng));
    }
}
BENCHMARK(BM_Encode)->Arg(16)->Arg(64)->Arg(128);

void BM_ServerMultiply(benchmark::State& state) {
    const auto& plan = grid_plan();
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 seed(2);
    const sdmm::Matrix a = random_matrix(dim, dim, plan.field().modulus(), seed);
    const sdmm::Matrix b = random_matrix(dim, dim, plan.field().modulus(), seed);
    for (auto _ : state)
        benchmark::DoNotOptimize(sdmm::server_multiply(a, b, plan.field()));
}
BENCHMARK(BM_ServerMultiply)->Arg(16)->Arg(64)->Arg(128);

void BM_Decode(benchmark::State& state) {
    const auto& plan = grid_plan();
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 seed(3);
    const sdmm::Matrix a = random_matrix(dim, dim, plan.field().modulus(), seed);
    const sdmm::Matrix b = random_matrix(dim, dim, plan.field().modulus(), seed);
    sdmm::UniformFieldRng rng(9);
    const sdmm::ShareSet shares = sdmm::encode(a, b, plan, rng);
    std::vector<sdmm::Matrix> products;
    for (std::uint64_t i = 0; i < plan.server_count(); ++i)
        products.push_back(
            sdmm::server_multiply(shares.share_a[i], shares.share_b[i], plan.field()));
    for (auto _ : state)
        benchmark::DoNotOptimize(sdmm::decode(products, plan));
}
BENCHMARK(BM_Decode)->Arg(16)->Arg(64)->Arg(128);

void BM_RunLocal(benchmark::State& state) {
    const auto& plan = grid_plan();
    const std::size_t dim = 64;
    std::mt19937_64 seed(4);
    const sdmm::Matrix a = random_matrix(dim, dim, plan.field().modulus(), seed);
    const sdmm::Matrix b = random_matrix(dim, dim, plan.field().modulus(), seed);
    const unsigned workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        sdmm::UniformFieldRng rng(11);
        benchmark::DoNotOptimize(sdmm::run_local(a, b, plan, rng, workers));
    }
}
BENCHMARK(BM_RunLocal)->Arg(1)->Arg(4)->Arg(13);

void BM_MinimalServerCount(benchmark::State& state) {
    const std::uint32_t size = static_cast<std::uint32_t>(state.range(0));
    const sdmm::PartitionParams params{size, size, size, 2};
    for (auto _ : state)
        benchmark::DoNotOptimize(sdmm::minimal_server_count(params));
}
BENCHMARK(BM_MinimalServerCount)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
