#include "tubelab/incidence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "tubelab/parallel.hpp"

namespace tubelab {

RichnessProfile::RichnessProfile(std::vector<std::int64_t> per_tube)
    : per_tube_(std::move(per_tube)) {
    for (auto r : per_tube_) {
        max_richness_ = std::max(max_richness_, r);
        total_ += r;
    }
    // Histogram then suffix-sum: at_least_[k] = #{tubes with richness >= k}.
    at_least_.assign(static_cast<std::size_t>(max_richness_) + 2, 0);
    for (auto r : per_tube_) ++at_least_[static_cast<std::size_t>(r)];
    for (std::int64_t k = max_richness_ - 1; k >= 0; --k) {
        at_least_[static_cast<std::size_t>(k)] += at_least_[static_cast<std::size_t>(k) + 1];
    }
}

std::int64_t RichnessProfile::count_at_least(std::int64_t k) const {
    if (k <= 0) return family_size();
    if (k > max_richness_) return 0;
    return at_least_[static_cast<std::size_t>(k)];
}

namespace {

RichTubes sweep_impl(const SpatialIndex& index, const DirectionNet& net, double delta,
                     double offset_spacing, std::int64_t k, int workers) {
    if (k < 1) k = 1;
    const auto ndirs = static_cast<std::int64_t>(net.centers.size());

    struct DirResult {
        std::vector<std::int64_t> richness;
        std::vector<Tube> rich;
        std::vector<std::int64_t> rich_local_ids;  // offset index within the direction
    };
    std::vector<DirResult> per_dir(static_cast<std::size_t>(ndirs));

    parallel_chunks(ndirs, workers == 0 ? default_workers() : workers,
                    [&](std::int64_t begin, std::int64_t end) {
                        for (std::int64_t dir = begin; dir < end; ++dir) {
                            auto& out = per_dir[static_cast<std::size_t>(dir)];
                            auto tubes = tubes_of_direction(net, static_cast<int>(dir), delta,
                                                            offset_spacing);
                            out.richness.reserve(tubes.size());
                            for (std::size_t i = 0; i < tubes.size(); ++i) {
                                const std::int64_t r = index.richness(tubes[i]);
                                out.richness.push_back(r);
                                if (r >= k) {
                                    out.rich.push_back(tubes[i]);
                                    out.rich_local_ids.push_back(static_cast<std::int64_t>(i));
                                }
                            }
                        }
                    });

    RichTubes result;
    std::vector<std::int64_t> all;
    std::int64_t base = 0;
    for (auto& dr : per_dir) {
        all.insert(all.end(), dr.richness.begin(), dr.richness.end());
        for (std::size_t i = 0; i < dr.rich.size(); ++i) {
            result.tubes.push_back(dr.rich[i]);
            result.tube_ids.push_back(base + dr.rich_local_ids[i]);
            result.richness.push_back(dr.richness[static_cast<std::size_t>(dr.rich_local_ids[i])]);
        }
        base += static_cast<std::int64_t>(dr.richness.size());
    }
    result.profile = RichnessProfile(std::move(all));
    return result;
}

}  // namespace

RichTubes rich_tubes(std::span<const Atom> atoms, const TubeFamily& family, std::int64_t k,
                     int workers) {
    SpatialIndex index(atoms, good_cell_size(atoms, family.delta));
    return sweep_impl(index, family.net, family.delta, family.offset_spacing, k, workers);
}

RichTubes rich_tubes(const SpatialIndex& index, const TubeFamily& family, std::int64_t k,
                     int workers) {
    return sweep_impl(index, family.net, family.delta, family.offset_spacing, k, workers);
}

RichTubes sweep_family(std::span<const Atom> atoms, const DirectionNet& net, double delta,
                       double offset_spacing, std::int64_t k, int workers) {
    SpatialIndex index(atoms, good_cell_size(atoms, delta));
    return sweep_impl(index, net, delta, offset_spacing, k, workers);
}

RichTubes sweep_family(const SpatialIndex& index, const DirectionNet& net, double delta,
                       double offset_spacing, std::int64_t k, int workers) {
    return sweep_impl(index, net, delta, offset_spacing, k, workers);
}

std::int64_t incidence_count(std::span<const Atom> atoms, std::span<const Tube> tubes,
                             int workers) {
    if (atoms.empty() || tubes.empty()) return 0;
    double width = tubes[0].width;
    SpatialIndex index(atoms, good_cell_size(atoms, width));
    return incidence_count(index, tubes, workers);
}

std::int64_t incidence_count(const SpatialIndex& index, std::span<const Tube> tubes,
                             int workers) {
    const auto n = static_cast<std::int64_t>(tubes.size());
    std::atomic<std::int64_t> total{0};
    parallel_chunks(n, workers == 0 ? default_workers() : workers,
                    [&](std::int64_t begin, std::int64_t end) {
                        std::int64_t acc = 0;
                        for (std::int64_t i = begin; i < end; ++i) {
                            const Tube& t = tubes[static_cast<std::size_t>(i)];
                            acc += t.weight * index.weighted_richness(t);
                        }
                        total.fetch_add(acc, std::memory_order_relaxed);
                    });
    return total.load();
}

double good_cell_size(std::span<const Atom> atoms, double delta) {
    double max_diam = delta;
    for (const auto& a : atoms) max_diam = std::max(max_diam, a.diameter);
    if (atoms.empty()) return std::max(max_diam, 0.25);
    // Aim for O(1) atoms per cell: cell ~ n^{-1/d} for n atoms, never finer
    // than the widest object and never coarser than a quarter of the cube.
    const int d = atoms[0].center.dim();
    const double density_cell =
        std::pow(static_cast<double>(atoms.size()), -1.0 / static_cast<double>(d));
    return std::clamp(density_cell, max_diam, std::max(max_diam, 0.25));
}

}  // namespace tubelab
