#include "tubelab/direction_net.hpp"

#include <cmath>
#include <stdexcept>

namespace tubelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Direction> half_circle(double resolution) {
    const int n = static_cast<int>(std::ceil(kPi / resolution));
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double theta = kPi * j / n;
        Vec v(2);
        v[0] = std::cos(theta);
        v[1] = std::sin(theta);
        out.push_back(Direction::from(v));
    }
    return out;
}

// Latitude-band net on the upper hemisphere of S^2: rings at polar spacing
// 1.3r with in-ring spacing at most 1.3r. Grid cells are near-squares of side
// 1.3r, so the covering radius is about 0.92r and pairwise angles stay above
// 0.65r (antipodal equator pairs are one full ring step apart).
std::vector<Direction> band_net_s2(double r) {
    const double step = 1.3 * r;
    const int rings = std::max(1, static_cast<int>(std::ceil((kPi / 2) / step)));
    const double dtheta = (kPi / 2) / rings;
    std::vector<Direction> out;
    for (int i = 0; i < rings; ++i) {
        const double theta = (i + 0.5) * dtheta;
        const double circ = 2.0 * kPi * std::sin(theta);
        const int n = std::max(1, static_cast<int>(std::ceil(circ / step)));
        const double stagger = (i % 2) * 0.5;
        for (int j = 0; j < n; ++j) {
            const double phi = 2.0 * kPi * (j + stagger) / n;
            Vec v(3);
            v[0] = std::sin(theta) * std::cos(phi);
            v[1] = std::sin(theta) * std::sin(phi);
            v[2] = std::cos(theta);
            out.push_back(Direction::from(v));
        }
    }
    return out;
}

// Hopf-coordinate lattice on S^3 with cubical cells of side 1.1r, closed
// under the antipodal map (both torus resolutions even) and halved to one
// representative per antipodal pair.
std::vector<Direction> hopf_net_s3(double r) {
    const double step = 1.1 * r;
    const int slices = std::max(1, static_cast<int>(std::ceil((kPi / 2) / step)));
    const double deta = (kPi / 2) / slices;
    auto even_count = [&](double circumference) {
        int n = static_cast<int>(std::ceil(circumference / step));
        n = std::max(2, n);
        return n + (n % 2);
    };
    std::vector<Direction> out;
    for (int i = 0; i < slices; ++i) {
        const double eta = (i + 0.5) * deta;
        const double c = std::cos(eta), s = std::sin(eta);
        const int n1 = even_count(2.0 * kPi * c);
        const int n2 = even_count(2.0 * kPi * s);
        // The antipode maps (j, k) to (j + n1/2, k + n2/2); keeping j < n1/2
        // selects exactly one point per antipodal pair.
        for (int j = 0; j < n1 / 2; ++j) {
            const double psi1 = 2.0 * kPi * j / n1;
            for (int k = 0; k < n2; ++k) {
                const double psi2 = 2.0 * kPi * k / n2;
                Vec v(4);
                v[0] = c * std::cos(psi1);
                v[1] = c * std::sin(psi1);
                v[2] = s * std::cos(psi2);
                v[3] = s * std::sin(psi2);
                out.push_back(Direction::from(v));
            }
        }
    }
    return out;
}

}  // namespace

DirectionNet build_direction_net(Dimension d, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("net resolution must lie in (0, 1)");
    }
    DirectionNet net{d, delta, {}};
    switch (d.value()) {
        case 2: net.centers = half_circle(delta); break;
        case 3: net.centers = band_net_s2(delta); break;
        default: net.centers = hopf_net_s3(delta); break;
    }
    return net;
}

int nearest_net_index(const DirectionNet& net, const Direction& u) {
    int best = 0;
    double best_angle = angle_between(net.centers[0], u);
    for (int i = 1; i < static_cast<int>(net.centers.size()); ++i) {
        double a = angle_between(net.centers[static_cast<std::size_t>(i)], u);
        if (a < best_angle) {
            best_angle = a;
            best = i;
        }
    }
    return best;
}

}  // namespace tubelab
