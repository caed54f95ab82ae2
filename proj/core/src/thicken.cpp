#include "tubelab/thicken.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "tubelab/direction_net.hpp"
#include "tubelab/tube_family.hpp"

namespace tubelab {

namespace {

void check_scale(double S, double delta, const char* what) {
    if (S == 1.0) return;
    if (!(S > 1.0 && S < 1.0 / delta)) {
        throw std::invalid_argument(std::string(what) + " scale must lie in (1, 1/delta)");
    }
}

}  // namespace

ThickenedAtoms thicken_atoms(std::span<const Atom> atoms, double S) {
    if (atoms.empty()) return {S, {}};
    const double delta = atoms[0].diameter;
    check_scale(S, delta, "atom thickening");
    if (S == 1.0) return {1.0, {atoms.begin(), atoms.end()}};

    const int d = atoms[0].center.dim();
    const double step = S * delta;

    std::map<std::array<std::int64_t, kMaxDim>, std::int64_t> cells;
    for (const auto& a : atoms) {
        std::array<std::int64_t, kMaxDim> key{};
        for (int i = 0; i < d; ++i) {
            key[static_cast<std::size_t>(i)] =
                static_cast<std::int64_t>(std::floor(a.center[i] / step));
        }
        cells[key] += a.weight;
    }

    ThickenedAtoms out{S, {}};
    out.atoms.reserve(cells.size());
    for (const auto& [key, weight] : cells) {
        Vec c(d);
        for (int i = 0; i < d; ++i) {
            c[i] = std::clamp((key[static_cast<std::size_t>(i)] + 0.5) * step, 0.0, 1.0);
        }
        out.atoms.push_back(Atom{c, step, weight});
    }
    return out;
}

ThickenedTubes thicken_tubes(std::span<const Tube> tubes, double S) {
    if (tubes.empty()) return {S, {}};
    const double delta = tubes[0].width;
    check_scale(S, delta, "tube thickening");
    if (S == 1.0) return {1.0, {tubes.begin(), tubes.end()}};

    const int d = tubes[0].direction.dim();
    const DirectionNet net = build_direction_net(Dimension(d), S * delta);
    const double step = 2.0 * S * delta;
    const Vec center = cube_center(d);

    // Per-net-direction orthonormal bases, built lazily.
    std::vector<std::vector<Vec>> bases(net.centers.size());

    struct Key {
        int dir;
        std::array<std::int64_t, kMaxDim> off;
        bool operator<(const Key& r) const {
            if (dir != r.dir) return dir < r.dir;
            return off < r.off;
        }
    };
    std::map<Key, std::int64_t> merged;

    for (const auto& t : tubes) {
        const int ni = nearest_net_index(net, t.direction);
        auto& basis = bases[static_cast<std::size_t>(ni)];
        if (basis.empty()) basis = orthogonal_basis(net.centers[static_cast<std::size_t>(ni)]);
        const Vec& u = net.centers[static_cast<std::size_t>(ni)].vec();
        Vec v = t.anchor - center;
        v = v - u * v.dot(u);  // project into the snapped direction's hyperplane
        Key key{ni, {}};
        for (int j = 0; j < d - 1; ++j) {
            key.off[static_cast<std::size_t>(j)] =
                std::llround(v.dot(basis[static_cast<std::size_t>(j)]) / step);
        }
        merged[key] += t.weight;
    }

    ThickenedTubes out{S, {}};
    out.tubes.reserve(merged.size());
    for (const auto& [key, weight] : merged) {
        const Direction& u = net.centers[static_cast<std::size_t>(key.dir)];
        const auto& basis = bases[static_cast<std::size_t>(key.dir)];
        Vec anchor = center;
        for (int j = 0; j < d - 1; ++j) {
            anchor = anchor + basis[static_cast<std::size_t>(j)] *
                                  (static_cast<double>(key.off[static_cast<std::size_t>(j)]) * step);
        }
        out.tubes.push_back(Tube{u, anchor, S * delta, weight});
    }
    return out;
}

}  // namespace tubelab
