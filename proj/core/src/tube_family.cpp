#include "tubelab/tube_family.hpp"

#include <cmath>
#include <stdexcept>

namespace tubelab {

std::vector<Vec> orthogonal_basis(const Direction& u) {
    const int d = u.dim();
    std::vector<Vec> basis;
    basis.reserve(static_cast<std::size_t>(d - 1));
    for (int j = 0; j < d && static_cast<int>(basis.size()) < d - 1; ++j) {
        Vec e(d);
        e[j] = 1.0;
        // Project out the direction and the basis vectors built so far.
        Vec v = e - u.vec() * e.dot(u.vec());
        for (const auto& b : basis) v = v - b * v.dot(b);
        const double n = v.norm();
        if (n > 1e-9) basis.push_back(v * (1.0 / n));
    }
    if (static_cast<int>(basis.size()) != d - 1) {
        throw std::logic_error("orthogonal basis construction failed");
    }
    return basis;
}

namespace {

void visit_direction(const DirectionNet& net, int dir_index, double delta,
                     double offset_spacing,
                     const std::function<void(const Tube&, int)>& fn) {
    const int d = net.d;
    const Direction& u = net.centers[static_cast<std::size_t>(dir_index)];
    const auto basis = orthogonal_basis(u);
    const Vec center = cube_center(d);

    // Any axis meeting the expanded cube has its closest point to the centre
    // within sqrt(d)/2 + delta/2 of it.
    const double reach = std::sqrt(static_cast<double>(d)) / 2.0 + delta;
    const int m = static_cast<int>(std::ceil(reach / offset_spacing));

    std::array<int, kMaxDim> idx{};
    idx.fill(-m);
    const int axes = d - 1;
    while (true) {
        Vec p = center;
        for (int j = 0; j < axes; ++j) {
            p = p + basis[static_cast<std::size_t>(j)] *
                        (idx[static_cast<std::size_t>(j)] * offset_spacing);
        }
        if (auto t = try_make_tube(u, p, delta)) {
            if (tube_body_meets_cube(*t)) fn(*t, dir_index);
        }
        int j = axes - 1;
        for (; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] <= m) break;
            idx[static_cast<std::size_t>(j)] = -m;
        }
        if (j < 0) break;
    }
}

}  // namespace

void visit_tubes(const DirectionNet& net, double delta, double offset_spacing,
                 const std::function<void(const Tube&, int)>& fn) {
    if (!(offset_spacing >= 2.0 * delta)) {
        throw std::invalid_argument("offset_spacing must be at least 2*delta");
    }
    if (!(net.angular_resolution >= 2.0 * delta)) {
        throw std::invalid_argument(
            "net resolution must be at least 2*delta for a pairwise-distinct family");
    }
    for (int i = 0; i < static_cast<int>(net.centers.size()); ++i) {
        visit_direction(net, i, delta, offset_spacing, fn);
    }
}

std::vector<Tube> tubes_of_direction(const DirectionNet& net, int dir_index, double delta,
                                     double offset_spacing) {
    std::vector<Tube> out;
    visit_direction(net, dir_index, delta, offset_spacing,
                    [&](const Tube& t, int) { out.push_back(t); });
    return out;
}

TubeFamily enumerate_tubes(const DirectionNet& net, double delta, double offset_spacing) {
    TubeFamily fam{{}, net, delta, offset_spacing};
    visit_tubes(net, delta, offset_spacing,
                [&](const Tube& t, int) { fam.tubes.push_back(t); });
    return fam;
}

TubeFamily standard_family(Dimension d, double delta) {
    return enumerate_tubes(build_direction_net(d, 2.0 * delta), delta, 2.0 * delta);
}

std::int64_t tubes_through_pair(const Atom& a1, const Atom& a2, const TubeFamily& family) {
    const double x = distance(a1.center, a2.center);
    // Conservative direction cut: an axis passing within r_i of both centres
    // makes an angle of at most asin(R / (x - R)) with the chord, R = r1 + r2.
    const double reach =
        (a1.diameter + family.delta) / 2.0 + (a2.diameter + family.delta) / 2.0;
    double max_angle = 3.2;  // no cut
    if (x > 2.0 * reach) {
        max_angle = std::asin(std::min(1.0, reach / (x - reach))) + 1e-9;
    }
    const Direction chord = Direction::from(a2.center - a1.center);

    std::int64_t count = 0;
    for (const auto& t : family.tubes) {
        if (angle_between(t.direction, chord) > max_angle) continue;
        if (atom_tube_incident(a1, t) && atom_tube_incident(a2, t)) ++count;
    }
    return count;
}

}  // namespace tubelab
