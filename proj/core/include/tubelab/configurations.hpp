#pragma once
/**
 * @file configurations.hpp
 * @brief Generators for the named atom configurations: well-spaced jittered
 * grids, the corner grid, the box and slice sharpness examples, and uniform
 * random sets. All generators are deterministic functions of their
 * parameters and seed.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tubelab/geometry.hpp"

namespace tubelab {

/// Parameters of the well-spaced family: floor(W)^d atoms, one per cube of
/// side 1/W, displaced per coordinate by a uniform jitter that keeps the
/// whole ball inside its cell.
struct WellSpacedParams {
    double W = 0.0;
    Dimension d{2};
    double delta = 0.0;
    double jitter = 0.0;  // in [0, 1): fraction of the maximal safe displacement
    std::uint64_t seed = 0;
};

enum class ConfigTag {
    kWellSpacedGrid,
    kCornerGrid,
    kBoxExample,
    kSliceExample,
    kUniformRandom,
};

std::string to_string(ConfigTag tag);

/// A generated atom set together with the generator that produced it.
struct ConfigurationLabel {
    ConfigTag tag;
    std::string params;
};

/// floor(W)^d atoms, one per W^{-1} cell; throws unless 1 < W < 1/delta and
/// jitter lies in [0, 1).
std::vector<Atom> gen_wellspaced_grid(const WellSpacedParams& p);

/// k^2 atoms on the delta-grid of a k*delta corner square in [0,1]^2.
/// Throws when k*delta >= 1.
std::vector<Atom> gen_corner_grid(int k, double delta);

/// k^d atoms on the delta-grid of a corner box of side k*delta.
std::vector<Atom> gen_box_example(int k, double delta, Dimension d);

/// The x1 = delta/2 slice of the box example: k^{d-1} atoms.
std::vector<Atom> gen_slice_example(int k, double delta, Dimension d);

/// n atoms with centres i.i.d. uniform over the cube shrunk by delta/2.
std::vector<Atom> gen_uniform_random(std::int64_t n, double delta, Dimension d,
                                     std::uint64_t seed);

/// Sum over unordered atom pairs of max(dist, delta)^{-(d-1)}, the two-rich
/// tube count proxy. Requires at least two atoms.
double two_rich_sum(std::span<const Atom> atoms, Dimension d);

}  // namespace tubelab
