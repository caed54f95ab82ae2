#pragma once
/**
 * @file thicken.hpp
 * @brief The S-thickening operator on weighted atoms and tubes.
 *
 * Thickening is implemented as quantisation: atom centres snap to the
 * S*delta grid and coinciding atoms merge with summed weights; tube
 * directions snap to an S*delta net and anchors to a 2*S*delta offset grid,
 * again merging coincident tubes. Total weight is conserved exactly. S = 1
 * is accepted as the identity.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/geometry.hpp"

namespace tubelab {

struct ThickenedAtoms {
    double scale = 1.0;
    std::vector<Atom> atoms;
};

struct ThickenedTubes {
    double scale = 1.0;
    std::vector<Tube> tubes;
};

/// Throws unless S == 1 or 1 < S < 1/delta (delta = atom diameter).
ThickenedAtoms thicken_atoms(std::span<const Atom> atoms, double S);

/// Throws unless S == 1 or 1 < S < 1/delta (delta = tube width).
ThickenedTubes thicken_tubes(std::span<const Tube> tubes, double S);

}  // namespace tubelab
