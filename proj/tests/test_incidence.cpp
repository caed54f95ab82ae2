#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "tubelab/configurations.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/rng.hpp"

using namespace tubelab;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}

Tube random_tube(Rng& rng, int d, double delta) {
    const Vec center = cube_center(d);
    for (;;) {
        Vec dir(d);
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            dir[i] = rng.uniform(-1.0, 1.0);
            n2 += dir[i] * dir[i];
        }
        if (n2 < 1e-12 || n2 > 1.0) continue;
        const Direction u = Direction::from(dir);
        const auto basis = orthogonal_basis(u);
        const double reach = std::sqrt(static_cast<double>(d)) / 2.0 + delta / 2.0;
        Vec p = center;
        for (int j = 0; j < d - 1; ++j) {
            p = p + basis[static_cast<std::size_t>(j)] * rng.uniform(-reach, reach);
        }
        if (auto t = try_make_tube(u, p, delta)) return *t;
    }
}

}  // namespace

TEST_CASE("index registers atoms in exactly the buckets their balls touch") {
    const double delta = 1.0 / 8;
    std::vector<Atom> atoms;
    atoms.push_back(make_atom(v2(0.5, 0.5), delta));
    atoms.push_back(make_atom(v2(0.03, 0.97), delta));
    const SpatialIndex index(atoms, 0.5);
    REQUIRE(index.cells_per_axis() == 2);
    for (std::int64_t cell = 0; cell < index.cell_count(); ++cell) {
        const int cx = static_cast<int>(cell / 2);
        const int cy = static_cast<int>(cell % 2);
        for (std::int32_t id = 0; id < 2; ++id) {
            const Atom& a = atoms[static_cast<std::size_t>(id)];
            double acc = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double lo = (i == 0 ? cx : cy) * 0.5;
                const double hi = lo + 0.5;
                const double x = a.center[i];
                const double e = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
                acc += e * e;
            }
            const bool touches = std::sqrt(acc) <= delta / 2;
            const auto bucket = index.bucket(cell);
            const bool present = std::find(bucket.begin(), bucket.end(), id) != bucket.end();
            CHECK(present == touches);
        }
    }
    CHECK_THROWS(SpatialIndex(atoms, delta / 2));  // cell smaller than diameter
    CHECK(SpatialIndex(std::vector<Atom>{}, 0.25).atom_count() == 0);
}

TEST_CASE("wellspaced buckets stay small") {
    const auto atoms = gen_wellspaced_grid({64.0, Dimension(2), 1.0 / 1024, 0.3, 5});
    const SpatialIndex index(atoms, 1.0 / 64);
    for (std::int64_t cell = 0; cell < index.cell_count(); ++cell) {
        CHECK(index.bucket(cell).size() <= 4);
    }
}

TEST_CASE("richness on the corner grid") {
    const double delta = 1.0 / 8;
    const auto atoms = gen_corner_grid(3, delta);
    const SpatialIndex index(atoms, good_cell_size(atoms, delta));

    // Horizontal tube through the middle row. Neighbouring rows sit at
    // distance exactly delta = (diameter+width)/2, so the closed-set
    // incidence rule counts all nine atoms.
    const Tube row = make_tube(Direction::from(v2(1, 0)), v2(0.5, 1.5 * delta), delta);
    CHECK(index.richness(row) == 9);
    CHECK(brute_force_richness(row, atoms) == 9);

    // A thinner tube through the same row picks out just the three atoms
    // whose centres lie on the axis.
    const Tube thin = make_tube(Direction::from(v2(1, 0)), v2(0.5, 1.5 * delta), delta / 2);
    CHECK(index.richness(thin) == 3);
    CHECK(brute_force_richness(thin, atoms) == 3);

    // Far away from the corner.
    const Tube empty = make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.9), delta);
    CHECK(index.richness(empty) == 0);
    CHECK(brute_force_richness(empty, atoms) == 0);

    // Three atoms spaced out on a line, the fourth off it.
    std::vector<Atom> sparse;
    for (int i = 0; i < 3; ++i) sparse.push_back(make_atom(v2(0.2 + 0.3 * i, 0.4), delta));
    sparse.push_back(make_atom(v2(0.5, 0.8), delta));
    const Tube line = make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.4), delta);
    CHECK(brute_force_richness(line, sparse) == 3);
    const SpatialIndex sparse_index(sparse, good_cell_size(sparse, delta));
    CHECK(sparse_index.richness(line) == 3);
}

TEST_CASE("oracle equivalence on random tubes and configurations") {
    Rng rng(23);
    for (int d = 2; d <= 3; ++d) {
        const double delta = 1.0 / 16;
        const Dimension dim(d);
        std::vector<std::vector<Atom>> sets;
        sets.push_back(gen_box_example(3, delta, dim));
        sets.push_back(gen_slice_example(4, delta, dim));
        sets.push_back(gen_uniform_random(200, delta, dim, 17));
        for (const auto& atoms : sets) {
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            for (int i = 0; i < 300; ++i) {
                const Tube t = random_tube(rng, d, delta);
                CHECK(index.richness(t) == brute_force_richness(t, atoms));
            }
        }
    }
}

TEST_CASE("richness ignores atom weights") {
    const double delta = 1.0 / 8;
    std::vector<Atom> atoms{make_atom(v2(0.5, 0.5), delta, 5)};
    const SpatialIndex index(atoms, delta);
    const Tube t = make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.5), delta);
    CHECK(index.richness(t) == 1);
    CHECK(index.weighted_richness(t) == 5);
}

TEST_CASE("rich_tubes and profile consistency") {
    const double delta = 1.0 / 16;
    const auto atoms = gen_corner_grid(3, delta);
    const auto fam = standard_family(Dimension(2), delta);

    const auto swept = rich_tubes(atoms, fam, 2);
    const auto& profile = swept.profile;
    CHECK(profile.family_size() == static_cast<std::int64_t>(fam.tubes.size()));

    // k larger than the atom count: nothing is rich.
    CHECK(rich_tubes(atoms, fam, 10).tubes.empty());

    // |T_k| non-increasing and the level identity
    // sum_k (|T_k| - |T_{k+1}|) k = total incidences.
    std::int64_t level_sum = 0;
    for (std::int64_t k = 1; k <= profile.max_richness(); ++k) {
        CHECK(profile.count_at_least(k) >= profile.count_at_least(k + 1));
        level_sum += (profile.count_at_least(k) - profile.count_at_least(k + 1)) * k;
    }
    CHECK(level_sum == profile.total_incidences());

    // Every reported rich tube really has the reported richness.
    const SpatialIndex index(atoms, good_cell_size(atoms, delta));
    for (std::size_t i = 0; i < swept.tubes.size(); ++i) {
        CHECK(index.richness(swept.tubes[i]) == swept.richness[i]);
        CHECK(swept.richness[i] >= 2);
    }

    // Deterministic across worker counts.
    const auto swept1 = rich_tubes(atoms, fam, 2, 1);
    const auto swept8 = rich_tubes(atoms, fam, 2, 8);
    CHECK(swept1.profile.per_tube() == swept8.profile.per_tube());
    CHECK(swept1.tube_ids == swept8.tube_ids);
}

TEST_CASE("incidence_count basics") {
    const double delta = 1.0 / 8;
    std::vector<Atom> atoms{make_atom(v2(0.25, 0.25), delta, 3)};
    std::vector<Tube> tubes{make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.25), delta, 2)};
    CHECK(incidence_count(atoms, tubes) == 6);

    std::vector<Tube> far{make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.9), delta, 2)};
    CHECK(incidence_count(atoms, far) == 0);
    CHECK(incidence_count(std::vector<Atom>{}, tubes) == 0);
}
