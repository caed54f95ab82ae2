#pragma once
/**
 * @file cell_partition.hpp
 * @brief D-cell partition of the cube, tubechens with weights and
 * multiplicities, the pigeonhole fraction, and the coarse-tube rescaling map.
 *
 * A tubechen is the trace of a rich tube in one cell of the D^d partition.
 * Traces with the same cell and the same incident-atom set are one tubechen;
 * its weight w is the number of those atoms and its multiplicity m the number
 * of rich tubes sharing the trace. Grouping incidences this way keeps
 * sum w(t) m(t) = I(A, T_k) exact.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/geometry.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/tube_family.hpp"

namespace tubelab {

/// D^d axis-aligned cells of side 1/D tiling the cube; every atom is assigned
/// to exactly one cell by its centre (boundary centres go to the
/// lexicographically smallest cell).
class CellGrid {
public:
    CellGrid(int D, std::span<const Atom> atoms, Dimension d);

    int subdivisions() const { return D_; }
    int dim() const { return d_; }
    std::int64_t cell_count() const { return static_cast<std::int64_t>(cells_.size()); }

    /// Flat row-major cell id of a point (tie rule: smallest cell).
    std::int64_t cell_index(const Vec& p) const;

    /// Lower corner of a cell.
    Vec cell_low(std::int64_t id) const;

    const std::vector<std::int32_t>& atoms_in_cell(std::int64_t id) const {
        return cells_[static_cast<std::size_t>(id)];
    }
    std::int64_t assigned_atoms() const { return assigned_; }

private:
    int D_;
    int d_;
    std::int64_t assigned_ = 0;
    std::vector<std::vector<std::int32_t>> cells_;
};

CellGrid build_cell_grid(int D, std::span<const Atom> atoms, Dimension d);

/// Cell ids traversed by the tube's axis inside the unit cube, using the same
/// boundary tie rule as atom assignment. Sorted ascending.
std::vector<std::int64_t> cells_crossed(const Tube& t, const CellGrid& grid);

struct Tubechen {
    std::int32_t tube_id;       // smallest parent tube id in the class
    std::int64_t cell_id;
    std::int64_t weight;        // atoms of the cell incident to the parents
    std::int64_t multiplicity;  // rich tubes sharing this trace
};

/// Tubechens of the rich family against the grid. Tube ids refer to positions
/// in `rich`. Includes empty traces (weight 0) for every crossed cell.
std::vector<Tubechen> compute_tubechens(std::span<const Atom> atoms,
                                        std::span<const Tube> rich, const CellGrid& grid);

struct TubechenReport {
    std::int64_t sum_wm = 0;
    std::int64_t incidence = 0;       // I(A, T_k) computed independently
    std::int64_t k_times_tk = 0;
    std::int64_t sum_m = 0;
    std::int64_t rich_count = 0;      // |T_k|
    bool identity_exact = false;      // sum w*m == I(A, T_k)
    bool pigeonhole_lower = false;    // k|T_k| <= sum w*m
    bool crossing_window = false;     // D|T_k|/low <= sum m <= high*sqrt(d)*D*|T_k|
    std::int64_t first_violation = -1;  // tube id for a failed per-tube check, else -1
};

/// Verifies the three tubechen identities. `window_low`/`window_high` bound
/// the crossing count: window_low * D * |T_k| <= sum m <= window_high *
/// sqrt(d) * D * |T_k|.
TubechenReport check_tubechen_identities(std::span<const Tubechen> tubechens,
                                         std::span<const Atom> atoms,
                                         std::span<const Tube> rich, std::int64_t k,
                                         const CellGrid& grid, double window_low = 1.0,
                                         double window_high = 2.0);

/// Fraction of sum w*m carried by tubechens with w >= threshold_factor * k/D.
double heavy_tubechen_fraction(std::span<const Tubechen> tubechens, std::int64_t k, int D,
                               double threshold_factor);

/// A cell blown up affinely to the unit cube: its atoms become D*delta atoms.
struct RescaledCell {
    std::int64_t cell_id;
    std::vector<Atom> atoms;
};
RescaledCell rescale_cell(const CellGrid& grid, std::int64_t cell_id,
                          std::span<const Atom> atoms);

/// The coarse-tube partition: the standard family at width D*delta.
TubeFamily dtube_partition(Dimension d, double delta, int D);

/// Index of the partition tube owning `t`: nearest direction, then nearest
/// axis offset, lexicographic tie-breaks. Total assignment is a function, so
/// summing members over the partition reproduces |T_k| exactly.
int assign_to_dtube(const Tube& t, const TubeFamily& taus);

/// A coarse tube fattened back to the unit cube: member tubechens become
/// weighted 1/D atoms, member rich tubes become 1/D tubes.
struct RescaledDTube {
    int tau_index = -1;
    std::vector<Atom> atoms;   // weights = tubechen weights (may be zero)
    std::vector<Tube> tubes;
};
RescaledDTube rescale_dtube(const TubeFamily& taus, int tau_index,
                            std::span<const Atom> atoms, std::span<const Tube> rich,
                            const CellGrid& grid);

}  // namespace tubelab
