#pragma once
/**
 * @file incidence.hpp
 * @brief Richness profiles, k-rich tube extraction and weighted incidence
 * counts over atom sets and tube families.
 */

#include <cstdint>
#include <span>
#include <vector>

#include "tubelab/spatial_index.hpp"
#include "tubelab/tube_family.hpp"

namespace tubelab {

/// Per-tube richness plus the level counts |T_k| = #{tubes with richness >= k}.
class RichnessProfile {
public:
    RichnessProfile() = default;
    explicit RichnessProfile(std::vector<std::int64_t> per_tube);

    const std::vector<std::int64_t>& per_tube() const { return per_tube_; }
    std::int64_t max_richness() const { return max_richness_; }

    /// |T_k| for k >= 1; |T_0| equals the family size.
    std::int64_t count_at_least(std::int64_t k) const;

    /// Sum of richness over the family: I(A, family) for unit weights.
    std::int64_t total_incidences() const { return total_; }

    std::int64_t family_size() const { return static_cast<std::int64_t>(per_tube_.size()); }

private:
    std::vector<std::int64_t> per_tube_;
    std::vector<std::int64_t> at_least_;  // index k -> |T_k|, size max_richness_+2
    std::int64_t max_richness_ = 0;
    std::int64_t total_ = 0;
};

struct RichTubes {
    std::vector<Tube> tubes;             // richness >= k, enumeration order
    std::vector<std::int64_t> tube_ids;  // family index of each rich tube
    std::vector<std::int64_t> richness;  // richness of each rich tube
    RichnessProfile profile;
};

/// All family tubes with richness >= k plus the full profile in one pass.
/// Parallel over net directions; results are in enumeration order regardless
/// of the worker count.
RichTubes rich_tubes(std::span<const Atom> atoms, const TubeFamily& family, std::int64_t k,
                     int workers = 0);
RichTubes rich_tubes(const SpatialIndex& index, const TubeFamily& family, std::int64_t k,
                     int workers = 0);

/// As rich_tubes but streams the family from its generator instead of
/// requiring a materialised tube vector.
RichTubes sweep_family(std::span<const Atom> atoms, const DirectionNet& net, double delta,
                       double offset_spacing, std::int64_t k, int workers = 0);
RichTubes sweep_family(const SpatialIndex& index, const DirectionNet& net, double delta,
                       double offset_spacing, std::int64_t k, int workers = 0);

/// Exact weighted incidence count: sum of w(a) * omega(t) over incident pairs.
std::int64_t incidence_count(std::span<const Atom> atoms, std::span<const Tube> tubes,
                             int workers = 0);

/// Weighted incidence against a prebuilt index.
std::int64_t incidence_count(const SpatialIndex& index, std::span<const Tube> tubes,
                             int workers = 0);

/// Cell size giving O(1) bucket occupancy: about n^{-1/d}, clamped so it is
/// never finer than the widest atom (or delta) and never coarser than 1/4.
double good_cell_size(std::span<const Atom> atoms, double delta);

}  // namespace tubelab
