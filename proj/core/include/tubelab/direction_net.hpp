#pragma once
/**
 * @file direction_net.hpp
 * @brief Caps nets on the canonical hemisphere of directions.
 *
 * A net at angular resolution r satisfies, under antipodal identification:
 *   packing:  pairwise angle between centers > r/2
 *   covering: every canonical direction is within angle r of some center
 * For d = 2 the net is ceil(pi/r) equally spaced angles on the half-circle;
 * for d >= 3 it is a low-discrepancy spiral thinned greedily to the packing
 * radius (covering is verified empirically, not proved).
 */

#include <vector>

#include "tubelab/geometry.hpp"

namespace tubelab {

struct DirectionNet {
    Dimension d{2};
    double angular_resolution = 0.0;
    std::vector<Direction> centers;
};

/// Builds the net at resolution `delta`. |centers| is within a constant
/// factor of delta^{-(d-1)}.
DirectionNet build_direction_net(Dimension d, double delta);

/// Index of the net center nearest to `u` (smallest index on ties).
int nearest_net_index(const DirectionNet& net, const Direction& u);

}  // namespace tubelab
