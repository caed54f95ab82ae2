#include "tubelab/cell_partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace tubelab {

namespace {

// Per-coordinate cell with the boundary tie rule: a centre exactly on a face
// belongs to the lower cell.
int coord_cell(double x, int D) {
    const double y = x * D;
    int i = static_cast<int>(std::ceil(y)) - 1;
    return std::clamp(i, 0, D - 1);
}

}  // namespace

CellGrid::CellGrid(int D, std::span<const Atom> atoms, Dimension d) : D_(D), d_(d) {
    if (D < 1) throw std::invalid_argument("cell grid requires D >= 1");
    std::int64_t total = 1;
    for (int i = 0; i < d_; ++i) total *= D;
    cells_.assign(static_cast<std::size_t>(total), {});
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(atoms.size()); ++id) {
        cells_[static_cast<std::size_t>(cell_index(atoms[static_cast<std::size_t>(id)].center))]
            .push_back(id);
        ++assigned_;
    }
}

std::int64_t CellGrid::cell_index(const Vec& p) const {
    std::int64_t flat = 0;
    for (int i = 0; i < d_; ++i) flat = flat * D_ + coord_cell(p[i], D_);
    return flat;
}

Vec CellGrid::cell_low(std::int64_t id) const {
    Vec lo(d_);
    for (int i = d_ - 1; i >= 0; --i) {
        lo[i] = static_cast<double>(id % D_) / D_;
        id /= D_;
    }
    return lo;
}

CellGrid build_cell_grid(int D, std::span<const Atom> atoms, Dimension d) {
    return CellGrid(D, atoms, d);
}

namespace {

// Cells crossed by the axis inside the unit cube, each with a representative
// point (the midpoint of the axis piece inside the cell).
std::vector<std::pair<std::int64_t, Vec>> crossed_with_reps(const Tube& t,
                                                            const CellGrid& grid) {
    std::vector<std::pair<std::int64_t, Vec>> out;
    const Vec& u = t.direction.vec();
    const Vec& p = t.anchor;
    const int d = p.dim();
    const int D = grid.subdivisions();

    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        if (u[i] == 0.0) {
            if (p[i] < 0.0 || p[i] > 1.0) return out;
            continue;
        }
        double lo = (0.0 - p[i]) / u[i];
        double hi = (1.0 - p[i]) / u[i];
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
        if (t0 > t1) return out;
    }

    // Breakpoints at every grid-plane crossing, then one cell per interval.
    std::vector<double> breaks{t0, t1};
    for (int i = 0; i < d; ++i) {
        if (u[i] == 0.0) continue;
        for (int j = 0; j <= D; ++j) {
            const double tc = (static_cast<double>(j) / D - p[i]) / u[i];
            if (tc > t0 && tc < t1) breaks.push_back(tc);
        }
    }
    std::sort(breaks.begin(), breaks.end());

    auto point_at = [&](double s) {
        Vec q(d);
        for (int i = 0; i < d; ++i) q[i] = p[i] + s * u[i];
        return q;
    };
    if (breaks.size() == 2 && breaks[0] == breaks[1]) {
        const Vec q = point_at(breaks[0]);
        out.emplace_back(grid.cell_index(q), q);
        return out;
    }
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        const Vec mid = point_at(0.5 * (breaks[i] + breaks[i + 1]));
        const std::int64_t cell = grid.cell_index(mid);
        if (out.empty() || out.back().first != cell) out.emplace_back(cell, mid);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              out.end());
    return out;
}

}  // namespace

std::vector<std::int64_t> cells_crossed(const Tube& t, const CellGrid& grid) {
    std::vector<std::int64_t> out;
    for (const auto& [cell, rep] : crossed_with_reps(t, grid)) out.push_back(cell);
    return out;
}

std::vector<Tubechen> compute_tubechens(std::span<const Atom> atoms,
                                        std::span<const Tube> rich, const CellGrid& grid) {
    std::vector<Tubechen> out;
    if (rich.empty()) return out;
    const double delta = rich[0].width;
    SpatialIndex index(atoms, good_cell_size(atoms, delta));

    // Class key: (cell, exact incident-atom set). Value: (first tube id, count).
    std::map<std::pair<std::int64_t, std::vector<std::int32_t>>,
             std::pair<std::int32_t, std::int64_t>>
        classes;

    for (std::int32_t id = 0; id < static_cast<std::int32_t>(rich.size()); ++id) {
        const Tube& t = rich[static_cast<std::size_t>(id)];
        // Fragments: incident atoms grouped by their cell, plus empty traces
        // for crossed cells with no incident atoms.
        std::map<std::int64_t, std::vector<std::int32_t>> frags;
        for (auto cell : cells_crossed(t, grid)) frags[cell];
        for (auto aid : index.incident_atoms(t)) {
            frags[grid.cell_index(atoms[static_cast<std::size_t>(aid)].center)].push_back(aid);
        }
        for (auto& [cell, ids] : frags) {
            auto it = classes.try_emplace({cell, std::move(ids)}, std::make_pair(id, std::int64_t{0}))
                          .first;
            ++it->second.second;
        }
    }

    out.reserve(classes.size());
    for (const auto& [key, val] : classes) {
        out.push_back(Tubechen{val.first, key.first,
                               static_cast<std::int64_t>(key.second.size()), val.second});
    }
    std::sort(out.begin(), out.end(), [](const Tubechen& a, const Tubechen& b) {
        return std::tie(a.tube_id, a.cell_id) < std::tie(b.tube_id, b.cell_id);
    });
    return out;
}

TubechenReport check_tubechen_identities(std::span<const Tubechen> tubechens,
                                         std::span<const Atom> atoms,
                                         std::span<const Tube> rich, std::int64_t k,
                                         const CellGrid& grid, double window_low,
                                         double window_high) {
    TubechenReport rep;
    rep.rich_count = static_cast<std::int64_t>(rich.size());
    for (const auto& tc : tubechens) {
        rep.sum_wm += tc.weight * tc.multiplicity;
        rep.sum_m += tc.multiplicity;
        if (tc.multiplicity < 1 && rep.first_violation < 0) rep.first_violation = tc.tube_id;
    }
    // Independent incidence count: per-tube richness via the index.
    if (!rich.empty()) {
        const double delta = rich[0].width;
        SpatialIndex index(atoms, good_cell_size(atoms, delta));
        for (const auto& t : rich) rep.incidence += index.richness(t);
    }
    rep.k_times_tk = k * rep.rich_count;
    rep.identity_exact = rep.sum_wm == rep.incidence;
    rep.pigeonhole_lower = rep.k_times_tk <= rep.sum_wm;
    const double d_sqrt = std::sqrt(static_cast<double>(grid.dim()));
    const double lo = window_low * grid.subdivisions() * static_cast<double>(rep.rich_count);
    const double hi =
        window_high * d_sqrt * grid.subdivisions() * static_cast<double>(rep.rich_count);
    rep.crossing_window =
        lo <= static_cast<double>(rep.sum_m) && static_cast<double>(rep.sum_m) <= hi;
    return rep;
}

double heavy_tubechen_fraction(std::span<const Tubechen> tubechens, std::int64_t k, int D,
                               double threshold_factor) {
    const double threshold = threshold_factor * static_cast<double>(k) / D;
    std::int64_t heavy = 0, total = 0;
    for (const auto& tc : tubechens) {
        const std::int64_t wm = tc.weight * tc.multiplicity;
        total += wm;
        if (static_cast<double>(tc.weight) >= threshold) heavy += wm;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(heavy) / static_cast<double>(total);
}

RescaledCell rescale_cell(const CellGrid& grid, std::int64_t cell_id,
                          std::span<const Atom> atoms) {
    RescaledCell out{cell_id, {}};
    const Vec lo = grid.cell_low(cell_id);
    const int D = grid.subdivisions();
    for (auto id : grid.atoms_in_cell(cell_id)) {
        const Atom& a = atoms[static_cast<std::size_t>(id)];
        Vec c = (a.center - lo) * static_cast<double>(D);
        for (int i = 0; i < c.dim(); ++i) c[i] = std::clamp(c[i], 0.0, 1.0);
        out.atoms.push_back(Atom{c, a.diameter * D, a.weight});
    }
    return out;
}

TubeFamily dtube_partition(Dimension d, double delta, int D) {
    return standard_family(d, D * delta);
}

int assign_to_dtube(const Tube& t, const TubeFamily& taus) {
    // Stage 1: nearest partition direction.
    int ni = nearest_net_index(taus.net, t.direction);
    const Direction& u = taus.net.centers[static_cast<std::size_t>(ni)];
    // Stage 2: nearest axis offset among that direction's tubes.
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(taus.tubes.size()); ++i) {
        const Tube& tau = taus.tubes[static_cast<std::size_t>(i)];
        if (!(tau.direction.vec() == u.vec())) continue;
        Vec diff = t.anchor - tau.anchor;
        diff = diff - u.vec() * diff.dot(u.vec());
        const double dist = diff.norm();
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

RescaledDTube rescale_dtube(const TubeFamily& taus, int tau_index,
                            std::span<const Atom> atoms, std::span<const Tube> rich,
                            const CellGrid& grid) {
    RescaledDTube out;
    out.tau_index = tau_index;
    const Tube& tau = taus.tubes[static_cast<std::size_t>(tau_index)];
    const int d = tau.direction.dim();
    const auto basis = orthogonal_basis(tau.direction);

    // Longitudinal range: the tau axis clipped to the unit cube.
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        const double ui = tau.direction[i];
        if (ui == 0.0) continue;
        double lo = (0.0 - tau.anchor[i]) / ui;
        double hi = (1.0 - tau.anchor[i]) / ui;
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
    }
    if (!(t1 > t0)) {
        t0 = -0.5;
        t1 = 0.5;
    }
    const double len = t1 - t0;
    const Vec start = tau.anchor + tau.direction.vec() * t0;

    auto map_point = [&](const Vec& x) {
        Vec y(d);
        y[0] = std::clamp((x - start).dot(tau.direction.vec()) / len, 0.0, 1.0);
        for (int j = 0; j < d - 1; ++j) {
            y[j + 1] = std::clamp(
                (x - tau.anchor).dot(basis[static_cast<std::size_t>(j)]) / tau.width + 0.5, 0.0,
                1.0);
        }
        return y;
    };
    auto map_dir = [&](const Vec& v) {
        Vec w(d);
        w[0] = v.dot(tau.direction.vec()) / len;
        for (int j = 0; j < d - 1; ++j) {
            w[j + 1] = v.dot(basis[static_cast<std::size_t>(j)]) / tau.width;
        }
        return w;
    };

    SpatialIndex index(atoms, good_cell_size(atoms, rich.empty() ? tau.width : rich[0].width));
    const double new_width = 1.0 / grid.subdivisions();

    for (const auto& t : rich) {
        if (assign_to_dtube(t, taus) != tau_index) continue;
        // Member tube image.
        out.tubes.push_back(make_tube_unchecked(Direction::from(map_dir(t.direction.vec())),
                                                map_point(t.anchor), new_width, t.weight));
        // Its tubechens become weighted 1/D atoms: one per crossed cell, at
        // the image of the axis midpoint inside the cell, weighted by the
        // cell's incident atoms.
        std::map<std::int64_t, std::pair<Vec, std::int64_t>> frags;
        for (const auto& [cell, rep] : crossed_with_reps(t, grid)) {
            frags.emplace(cell, std::make_pair(rep, std::int64_t{0}));
        }
        for (auto aid : index.incident_atoms(t)) {
            const Vec& c = atoms[static_cast<std::size_t>(aid)].center;
            const std::int64_t cell = grid.cell_index(c);
            auto it = frags.find(cell);
            if (it == frags.end()) {
                // Atom cell not traversed by the axis: represent the fragment
                // by the atom centre projected onto the axis.
                const double s = (c - t.anchor).dot(t.direction.vec());
                it = frags.emplace(cell, std::make_pair(t.anchor + t.direction.vec() * s,
                                                        std::int64_t{0}))
                         .first;
            }
            ++it->second.second;
        }
        for (const auto& [cell, frag] : frags) {
            out.atoms.push_back(Atom{map_point(frag.first), 1.0 / grid.subdivisions(),
                                     frag.second});
        }
    }
    return out;
}

}  // namespace tubelab
