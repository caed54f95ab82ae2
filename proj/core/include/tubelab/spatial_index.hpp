#pragma once
/**
 * @file spatial_index.hpp
 * @brief Uniform-grid index over atoms for fast richness queries.
 *
 * Each atom is registered in exactly the grid cells its closed ball
 * intersects. A tube query enumerates every cell within candidate reach of
 * the clipped axis segment, gathers a superset of candidates and filters them
 * with the exact incidence predicate, so indexed counts equal brute force
 * bit-for-bit. The index is immutable after construction and safe for
 * concurrent queries (per-thread scratch).
 */

#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/geometry.hpp"

namespace tubelab {

class SpatialIndex {
public:
    /// Throws unless cell_size >= every atom diameter.
    SpatialIndex(std::span<const Atom> atoms, double cell_size);

    int dim() const { return d_; }
    double cell_size() const { return cell_; }
    std::size_t atom_count() const { return atoms_.size(); }
    const std::vector<Atom>& atoms() const { return atoms_; }

    /// Number of distinct atoms incident to the tube (weights ignored).
    std::int64_t richness(const Tube& t) const;

    /// Sum of atom weights over distinct incident atoms.
    std::int64_t weighted_richness(const Tube& t) const;

    /// Atom ids incident to the tube, ascending.
    std::vector<std::int32_t> incident_atoms(const Tube& t) const;

    /// Cells per axis and flat cell count (for invariant tests).
    int cells_per_axis() const { return n_; }
    std::int64_t cell_count() const { return total_cells_; }
    std::span<const std::int32_t> bucket(std::int64_t flat_cell) const;

private:
    template <typename Fn>
    void for_candidates(const Tube& t, Fn&& fn) const;

    int d_ = 2;
    double cell_ = 0.0;
    int n_ = 0;                  // cells per axis
    std::int64_t total_cells_ = 0;
    double max_diameter_ = 0.0;
    std::vector<Atom> atoms_;
    std::vector<std::int64_t> bucket_start_;  // CSR over flat cell ids
    std::vector<std::int32_t> bucket_atoms_;
};

SpatialIndex build_spatial_index(std::span<const Atom> atoms, double cell_size);

/// Linear-scan oracle for richness; independent of the index path.
std::int64_t brute_force_richness(const Tube& t, std::span<const Atom> atoms);

}  // namespace tubelab
