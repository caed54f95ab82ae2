#include <doctest.h>

#include <cmath>
#include <set>

#include "tubelab/cell_partition.hpp"
#include "tubelab/configurations.hpp"

using namespace tubelab;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}

}  // namespace

TEST_CASE("cell grid assignment") {
    const auto atoms = gen_wellspaced_grid({16.0, Dimension(2), 1.0 / 256, 0.0, 1});
    const CellGrid one(1, atoms, Dimension(2));
    CHECK(one.cell_count() == 1);
    CHECK(one.atoms_in_cell(0).size() == 256);

    const CellGrid grid(4, atoms, Dimension(2));
    std::int64_t total = 0;
    for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
        CHECK(grid.atoms_in_cell(c).size() == 16);
        total += static_cast<std::int64_t>(grid.atoms_in_cell(c).size());
    }
    CHECK(total == 256);

    // A centre exactly on a shared face goes to the lower cell.
    std::vector<Atom> boundary{make_atom(v2(0.5, 0.3), 1.0 / 64)};
    const CellGrid g2(2, boundary, Dimension(2));
    CHECK(g2.atoms_in_cell(g2.cell_index(v2(0.5, 0.3))).size() == 1);
    CHECK(g2.cell_index(v2(0.5, 0.3)) == 0 * 2 + 0);  // x-cell 0, y-cell 0
    CHECK(g2.cell_index(v2(0.75, 0.3)) == 1 * 2 + 0);
    CHECK(g2.cell_index(v2(1.0, 1.0)) == 1 * 2 + 1);  // clamps into the last cell
}

TEST_CASE("cell grid in d=3 partitions exactly") {
    const auto atoms = gen_box_example(4, 1.0 / 16, Dimension(3));
    const CellGrid grid(3, atoms, Dimension(3));
    CHECK(grid.cell_count() == 27);
    std::int64_t total = 0;
    for (std::int64_t c = 0; c < grid.cell_count(); ++c) {
        total += static_cast<std::int64_t>(grid.atoms_in_cell(c).size());
    }
    CHECK(total == 64);
    CHECK(grid.assigned_atoms() == 64);

    // Tubechen identity holds in d=3 as well.
    const double delta = 1.0 / 16;
    const auto swept = rich_tubes(atoms, standard_family(Dimension(3), delta), 4);
    REQUIRE(!swept.tubes.empty());
    const auto tcs = compute_tubechens(atoms, swept.tubes, grid);
    const auto rep = check_tubechen_identities(tcs, atoms, swept.tubes, 4, grid);
    CHECK(rep.identity_exact);
    CHECK(rep.pigeonhole_lower);
}

TEST_CASE("cells crossed by an axis-parallel tube") {
    const double delta = 1.0 / 64;
    std::vector<Atom> none;
    const CellGrid grid(8, none, Dimension(2));
    const Tube t = make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.37), delta);
    const auto crossed = cells_crossed(t, grid);
    CHECK(crossed.size() >= 8);
    CHECK(crossed.size() <= 9);

    // Diagonal tube through the whole square crosses about 2D cells.
    const Tube diag = make_tube(Direction::from(v2(1, 1)), v2(0.5, 0.5), delta);
    const auto dc = cells_crossed(diag, grid);
    CHECK(dc.size() >= 8);
    CHECK(dc.size() <= 17);
}

TEST_CASE("tubechens: degenerate cases") {
    const double delta = 1.0 / 16;
    const auto atoms = gen_corner_grid(3, delta);
    const CellGrid grid(1, atoms, Dimension(2));

    CHECK(compute_tubechens(atoms, std::vector<Tube>{}, grid).empty());

    std::vector<Tube> one{make_tube(Direction::from(v2(1, 0)), v2(0.5, 1.5 * delta), delta)};
    const auto tcs = compute_tubechens(atoms, one, grid);
    REQUIRE(tcs.size() == 1);
    CHECK(tcs[0].weight == brute_force_richness(one[0], atoms));  // D=1: w = richness
    CHECK(tcs[0].multiplicity == 1);
    CHECK(tcs[0].cell_id == 0);
}

TEST_CASE("tubechen identities are exact on the corner grid") {
    const double delta = 1.0 / 128;
    const int k = 8;
    const auto atoms = gen_corner_grid(k, delta);
    const auto swept = rich_tubes(atoms, standard_family(Dimension(2), delta), k);
    REQUIRE(!swept.tubes.empty());

    const CellGrid grid(8, atoms, Dimension(2));
    const auto tcs = compute_tubechens(atoms, swept.tubes, grid);
    const auto rep = check_tubechen_identities(tcs, atoms, swept.tubes, k, grid);

    CHECK(rep.identity_exact);
    CHECK(rep.pigeonhole_lower);
    std::int64_t expected_inc = 0;
    for (auto r : swept.richness) expected_inc += r;
    CHECK(rep.incidence == expected_inc);
    for (const auto& tc : tcs) CHECK(tc.multiplicity >= 1);
}

TEST_CASE("heavy tubechen fraction") {
    std::vector<Tubechen> tcs{{0, 0, 4, 2}, {1, 1, 3, 1}};
    CHECK(heavy_tubechen_fraction(tcs, 8, 4, 0.5) == doctest::Approx(1.0));  // all heavy
    CHECK(heavy_tubechen_fraction(tcs, 64, 2, 1.0) == doctest::Approx(0.0));  // none heavy
    const double frac = heavy_tubechen_fraction(tcs, 8, 1, 0.5);  // threshold 4
    CHECK(frac == doctest::Approx(8.0 / 11.0));
    CHECK(heavy_tubechen_fraction(std::vector<Tubechen>{}, 8, 4, 0.5) == 0.0);
}

TEST_CASE("rescaled cell preserves local richness") {
    const double delta = 1.0 / 64;
    const auto atoms = gen_wellspaced_grid({16.0, Dimension(2), delta, 0.0, 1});
    const CellGrid grid(4, atoms, Dimension(2));

    // A tube along one atom row, well inside cell (1,1).
    const double y = (8 + 0.5) / 16.0;
    const Tube t = make_tube(Direction::from(v2(1, 0)), v2(0.5, y), delta);

    const std::int64_t cell = grid.cell_index(v2(0.3, y));
    const auto rc = rescale_cell(grid, cell, atoms);
    REQUIRE(!rc.atoms.empty());
    for (const auto& a : rc.atoms) CHECK(a.diameter == doctest::Approx(delta * 4));

    // Count atoms of this cell incident to the tube, then compare with the
    // rescaled tube's richness over the rescaled atoms.
    std::int64_t w = 0;
    for (auto id : grid.atoms_in_cell(cell)) {
        if (atom_tube_incident(atoms[static_cast<std::size_t>(id)], t)) ++w;
    }
    const Vec lo = grid.cell_low(cell);
    const Tube scaled = make_tube_unchecked(
        t.direction, (t.anchor - lo) * 4.0, t.width * 4);
    std::int64_t r = 0;
    for (const auto& a : rc.atoms) {
        if (atom_tube_incident(a, scaled)) ++r;
    }
    CHECK(w > 0);
    CHECK(r == w);
}

TEST_CASE("coarse tube partition assigns every rich tube exactly once") {
    const double delta = 1.0 / 64;
    const int D = 8;
    const int k = 4;
    const auto atoms = gen_corner_grid(k, delta);
    const auto swept = rich_tubes(atoms, standard_family(Dimension(2), delta), k);
    REQUIRE(!swept.tubes.empty());

    const auto taus = dtube_partition(Dimension(2), delta, D);
    const CellGrid grid(D, atoms, Dimension(2));

    std::int64_t members_total = 0;
    std::int64_t atoms_weight_total = 0;
    for (int ti = 0; ti < static_cast<int>(taus.tubes.size()); ++ti) {
        const auto rs = rescale_dtube(taus, ti, atoms, swept.tubes, grid);
        members_total += static_cast<std::int64_t>(rs.tubes.size());
        for (const auto& a : rs.atoms) atoms_weight_total += a.weight;
        for (const auto& t : rs.tubes) {
            CHECK(t.width == doctest::Approx(1.0 / D));
        }
    }
    CHECK(members_total == static_cast<std::int64_t>(swept.tubes.size()));
    // Total fragment weight equals the total incidence count of the rich set.
    std::int64_t expected = 0;
    for (auto r : swept.richness) expected += r;
    CHECK(atoms_weight_total == expected);
}

TEST_CASE("rescale_dtube on a single axis-parallel tube") {
    const double delta = 1.0 / 64;
    const int D = 4;
    // Four collinear atoms along y = 0.5: a 4-rich horizontal tube.
    std::vector<Atom> atoms;
    for (int i = 0; i < 4; ++i) atoms.push_back(make_atom(v2(0.2 + 0.2 * i, 0.5), delta));
    const Tube t = make_tube(Direction::from(v2(1, 0)), v2(0.5, 0.5), delta);
    std::vector<Tube> rich{t};

    const auto taus = dtube_partition(Dimension(2), delta, D);
    const CellGrid grid(D, atoms, Dimension(2));
    const int ti = assign_to_dtube(t, taus);
    REQUIRE(ti >= 0);

    const auto rs = rescale_dtube(taus, ti, atoms, rich, grid);
    CHECK(rs.tubes.size() == 1);
    CHECK(rs.atoms.size() == 4);  // one fragment per crossed cell
    std::int64_t w = 0;
    for (const auto& a : rs.atoms) {
        w += a.weight;
        CHECK(a.diameter == doctest::Approx(1.0 / D));
        CHECK(in_unit_cube(a.center));
    }
    CHECK(w == 4);

    // A far-away coarse tube holds nothing.
    int empty_ti = -1;
    for (int i = 0; i < static_cast<int>(taus.tubes.size()); ++i) {
        if (i != ti) {
            empty_ti = i;
            break;
        }
    }
    const auto rs_empty = rescale_dtube(taus, empty_ti, atoms, rich, grid);
    CHECK(rs_empty.tubes.empty());
    CHECK(rs_empty.atoms.empty());
}
