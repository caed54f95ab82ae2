#include <benchmark/benchmark.h>

#include "tubelab/configurations.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/rng.hpp"
#include "tubelab/tube_family.hpp"

using namespace tubelab;

namespace {

std::vector<Tube> sample_tubes(int d, double delta, int count) {
    Rng rng(5);
    const Vec center = cube_center(d);
    std::vector<Tube> out;
    while (static_cast<int>(out.size()) < count) {
        Vec dir(d);
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            dir[i] = rng.uniform(-1.0, 1.0);
            n2 += dir[i] * dir[i];
        }
        if (n2 < 1e-12 || n2 > 1.0) continue;
        const Direction u = Direction::from(dir);
        const auto basis = orthogonal_basis(u);
        Vec p = center;
        for (int j = 0; j < d - 1; ++j) {
            p = p + basis[static_cast<std::size_t>(j)] * rng.uniform(-0.7, 0.7);
        }
        if (auto t = try_make_tube(u, p, delta)) out.push_back(*t);
    }
    return out;
}

void BM_IndexedRichness(benchmark::State& state) {
    const auto w = static_cast<double>(state.range(0));
    const double delta = 1.0 / 1024;
    const auto atoms = gen_wellspaced_grid({w, Dimension(2), delta, 0.3, 1});
    const SpatialIndex index(atoms, good_cell_size(atoms, delta));
    const auto tubes = sample_tubes(2, delta, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.richness(tubes[i++ % tubes.size()]));
    }
}
BENCHMARK(BM_IndexedRichness)->Arg(16)->Arg(32)->Arg(64);

void BM_BruteForceRichness(benchmark::State& state) {
    const auto w = static_cast<double>(state.range(0));
    const double delta = 1.0 / 1024;
    const auto atoms = gen_wellspaced_grid({w, Dimension(2), delta, 0.3, 1});
    const auto tubes = sample_tubes(2, delta, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_richness(tubes[i++ % tubes.size()], atoms));
    }
}
BENCHMARK(BM_BruteForceRichness)->Arg(16)->Arg(32)->Arg(64);

void BM_EnumerateFamily(benchmark::State& state) {
    const double delta = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(standard_family(Dimension(2), delta).tubes.size());
    }
}
BENCHMARK(BM_EnumerateFamily)->Arg(64)->Arg(128)->Arg(256);

void BM_FamilySweep(benchmark::State& state) {
    const double delta = 1.0 / 256;
    const auto w = static_cast<double>(state.range(0));
    const auto atoms = gen_wellspaced_grid({w, Dimension(2), delta, 0.3, 1});
    const SpatialIndex index(atoms, good_cell_size(atoms, delta));
    const auto net = build_direction_net(Dimension(2), 2 * delta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sweep_family(index, net, delta, 2 * delta, 4).profile.total_incidences());
    }
}
BENCHMARK(BM_FamilySweep)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
