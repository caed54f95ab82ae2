#pragma once
/**
 * @file tube_family.hpp
 * @brief Maximal-ish pairwise-distinct tube families: a direction net crossed
 * with an offset grid in each direction's orthogonal hyperplane.
 *
 * Distinctness holds by construction when the net resolution is at least
 * 2*delta (neighbouring directions then differ by more than delta) and the
 * offset spacing is at least 2*delta (same-direction tubes are disjoint).
 * Enumeration order is fixed: direction index, then lexicographic offset.
 */

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tubelab/direction_net.hpp"
#include "tubelab/geometry.hpp"

namespace tubelab {

struct TubeFamily {
    std::vector<Tube> tubes;
    DirectionNet net;
    double delta = 0.0;
    double offset_spacing = 0.0;
};

/// Deterministic orthonormal basis of the hyperplane orthogonal to `u`.
std::vector<Vec> orthogonal_basis(const Direction& u);

/// Enumerates the family for `net`. Throws unless offset_spacing >= 2*delta
/// and net.angular_resolution >= 2*delta (both are required for the family
/// to be pairwise distinct).
TubeFamily enumerate_tubes(const DirectionNet& net, double delta, double offset_spacing);

/// The family used throughout experiments: net resolution 2*delta, offset
/// spacing 2*delta.
TubeFamily standard_family(Dimension d, double delta);

/// Streaming enumeration: calls fn(tube, direction_index) for every family
/// tube in enumeration order without materialising the family.
void visit_tubes(const DirectionNet& net, double delta, double offset_spacing,
                 const std::function<void(const Tube&, int)>& fn);

/// Tubes of one direction of the family, in offset order.
std::vector<Tube> tubes_of_direction(const DirectionNet& net, int dir_index, double delta,
                                     double offset_spacing);

/// Number of family tubes incident to both atoms. Pre: atoms_distinct holds
/// and the atoms' diameters equal the family width.
std::int64_t tubes_through_pair(const Atom& a1, const Atom& a2, const TubeFamily& family);

}  // namespace tubelab
