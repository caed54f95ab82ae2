#include "tubelab/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tubelab {

namespace {

// Per-thread query scratch: epoch-stamped visited marks for cells and atoms.
struct QueryScratch {
    const void* owner = nullptr;
    std::vector<std::uint32_t> cell_mark;
    std::vector<std::uint32_t> atom_mark;
    std::uint32_t epoch = 0;
};

thread_local QueryScratch tl_scratch;

QueryScratch& scratch_for(const void* owner, std::int64_t cells, std::size_t atoms) {
    auto& s = tl_scratch;
    if (s.owner != owner || s.cell_mark.size() != static_cast<std::size_t>(cells) ||
        s.atom_mark.size() != atoms) {
        s.owner = owner;
        s.cell_mark.assign(static_cast<std::size_t>(cells), 0);
        s.atom_mark.assign(atoms, 0);
        s.epoch = 0;
    }
    if (s.epoch == std::numeric_limits<std::uint32_t>::max()) {
        std::fill(s.cell_mark.begin(), s.cell_mark.end(), 0);
        std::fill(s.atom_mark.begin(), s.atom_mark.end(), 0);
        s.epoch = 0;
    }
    ++s.epoch;
    return s;
}

double ball_cell_distance(const Vec& c, const std::array<int, kMaxDim>& cell, double size,
                          int d) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
        const double lo = cell[static_cast<std::size_t>(i)] * size;
        const double hi = lo + size;
        const double e = c[i] < lo ? lo - c[i] : (c[i] > hi ? c[i] - hi : 0.0);
        acc += e * e;
    }
    return std::sqrt(acc);
}

}  // namespace

SpatialIndex::SpatialIndex(std::span<const Atom> atoms, double cell_size)
    : cell_(cell_size), atoms_(atoms.begin(), atoms.end()) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
    for (const auto& a : atoms_) {
        max_diameter_ = std::max(max_diameter_, a.diameter);
        if (a.diameter > cell_size) {
            throw std::invalid_argument("cell size must be at least every atom diameter");
        }
    }
    d_ = atoms_.empty() ? 2 : atoms_[0].center.dim();
    n_ = std::max(1, static_cast<int>(std::ceil(1.0 / cell_size)));
    total_cells_ = 1;
    for (int i = 0; i < d_; ++i) {
        total_cells_ *= n_;
        if (total_cells_ > (std::int64_t{1} << 26)) {
            throw std::invalid_argument("spatial index grid too fine");
        }
    }

    // Count-then-fill CSR: atom -> all cells its closed ball intersects.
    std::vector<std::int64_t> counts(static_cast<std::size_t>(total_cells_) + 1, 0);
    auto for_ball_cells = [&](const Atom& a, auto&& fn) {
        const double r = a.diameter / 2.0;
        std::array<int, kMaxDim> lo{}, hi{}, it{};
        for (int i = 0; i < d_; ++i) {
            lo[static_cast<std::size_t>(i)] = std::max(
                0, static_cast<int>(std::floor((a.center[i] - r) / cell_)));
            hi[static_cast<std::size_t>(i)] = std::min(
                n_ - 1, static_cast<int>(std::floor((a.center[i] + r) / cell_)));
            it[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
        }
        while (true) {
            if (ball_cell_distance(a.center, it, cell_, d_) <= r) {
                std::int64_t flat = 0;
                for (int i = 0; i < d_; ++i) flat = flat * n_ + it[static_cast<std::size_t>(i)];
                fn(flat);
            }
            int j = d_ - 1;
            for (; j >= 0; --j) {
                if (++it[static_cast<std::size_t>(j)] <= hi[static_cast<std::size_t>(j)]) break;
                it[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
            }
            if (j < 0) break;
        }
    };

    for (const auto& a : atoms_) {
        for_ball_cells(a, [&](std::int64_t flat) { ++counts[static_cast<std::size_t>(flat) + 1]; });
    }
    for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    bucket_start_ = counts;
    bucket_atoms_.resize(static_cast<std::size_t>(bucket_start_.back()));
    std::vector<std::int64_t> cursor(bucket_start_.begin(), bucket_start_.end() - 1);
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(atoms_.size()); ++id) {
        for_ball_cells(atoms_[static_cast<std::size_t>(id)], [&](std::int64_t flat) {
            bucket_atoms_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(flat)]++)] = id;
        });
    }
}

std::span<const std::int32_t> SpatialIndex::bucket(std::int64_t flat_cell) const {
    const auto b = static_cast<std::size_t>(bucket_start_[static_cast<std::size_t>(flat_cell)]);
    const auto e = static_cast<std::size_t>(bucket_start_[static_cast<std::size_t>(flat_cell) + 1]);
    return {bucket_atoms_.data() + b, e - b};
}

template <typename Fn>
void SpatialIndex::for_candidates(const Tube& t, Fn&& fn) const {
    if (atoms_.empty()) return;
    auto seg = clipped_axis(t);
    if (!seg) return;

    auto& s = scratch_for(this, total_cells_, atoms_.size());
    const double reach = (max_diameter_ + t.width) / 2.0;
    // Cell box half-extent covering every centre within `reach` of a sample
    // point (samples at cell/2 spacing along the segment).
    const int br = static_cast<int>(std::floor((reach + 0.25 * cell_) / cell_)) + 1;

    const Vec dir = seg->b - seg->a;
    const double len = dir.norm();
    const int steps = std::max(1, static_cast<int>(std::ceil(len / (cell_ / 2.0))));

    for (int sstep = 0; sstep <= steps; ++sstep) {
        const Vec p = seg->a + dir * (static_cast<double>(sstep) / steps);
        std::array<int, kMaxDim> lo{}, hi{}, it{};
        bool empty_box = false;
        for (int i = 0; i < d_; ++i) {
            const int c = static_cast<int>(std::floor(p[i] / cell_));
            lo[static_cast<std::size_t>(i)] = std::max(0, c - br);
            hi[static_cast<std::size_t>(i)] = std::min(n_ - 1, c + br);
            if (lo[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) {
                empty_box = true;
                break;
            }
            it[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
        }
        if (empty_box) continue;
        while (true) {
            std::int64_t flat = 0;
            for (int i = 0; i < d_; ++i) flat = flat * n_ + it[static_cast<std::size_t>(i)];
            if (s.cell_mark[static_cast<std::size_t>(flat)] != s.epoch) {
                s.cell_mark[static_cast<std::size_t>(flat)] = s.epoch;
                for (std::int32_t id : bucket(flat)) {
                    if (s.atom_mark[static_cast<std::size_t>(id)] != s.epoch) {
                        s.atom_mark[static_cast<std::size_t>(id)] = s.epoch;
                        fn(id);
                    }
                }
            }
            int j = d_ - 1;
            for (; j >= 0; --j) {
                if (++it[static_cast<std::size_t>(j)] <= hi[static_cast<std::size_t>(j)]) break;
                it[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
            }
            if (j < 0) break;
        }
    }
}

std::int64_t SpatialIndex::richness(const Tube& t) const {
    std::int64_t count = 0;
    for_candidates(t, [&](std::int32_t id) {
        if (atom_tube_incident(atoms_[static_cast<std::size_t>(id)], t)) ++count;
    });
    return count;
}

std::int64_t SpatialIndex::weighted_richness(const Tube& t) const {
    std::int64_t acc = 0;
    for_candidates(t, [&](std::int32_t id) {
        const Atom& a = atoms_[static_cast<std::size_t>(id)];
        if (atom_tube_incident(a, t)) acc += a.weight;
    });
    return acc;
}

std::vector<std::int32_t> SpatialIndex::incident_atoms(const Tube& t) const {
    std::vector<std::int32_t> out;
    for_candidates(t, [&](std::int32_t id) {
        if (atom_tube_incident(atoms_[static_cast<std::size_t>(id)], t)) out.push_back(id);
    });
    std::sort(out.begin(), out.end());
    return out;
}

SpatialIndex build_spatial_index(std::span<const Atom> atoms, double cell_size) {
    return SpatialIndex(atoms, cell_size);
}

std::int64_t brute_force_richness(const Tube& t, std::span<const Atom> atoms) {
    std::int64_t count = 0;
    for (const auto& a : atoms) {
        if (atom_tube_incident(a, t)) ++count;
    }
    return count;
}

}  // namespace tubelab
