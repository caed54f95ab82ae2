#include <doctest.h>

#include <cmath>

#include "tubelab/configurations.hpp"
#include "tubelab/direction_net.hpp"
#include "tubelab/rng.hpp"
#include "tubelab/tube_family.hpp"

using namespace tubelab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Direction random_direction(Rng& rng, int d) {
    for (;;) {
        Vec v(d);
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            v[i] = rng.uniform(-1.0, 1.0);
            n2 += v[i] * v[i];
        }
        if (n2 > 1e-12 && n2 <= 1.0) return Direction::from(v);
    }
}

double nearest_center_angle(const DirectionNet& net, const Direction& u) {
    double best = 10.0;
    for (const auto& c : net.centers) best = std::min(best, angle_between(c, u));
    return best;
}

}  // namespace

TEST_CASE("half-circle net: counts and spacing") {
    const auto net8 = build_direction_net(Dimension(2), kPi / 8);
    REQUIRE(net8.centers.size() == 8);
    for (int j = 0; j < 8; ++j) {
        const double theta = j * kPi / 8;
        CHECK(net8.centers[static_cast<std::size_t>(j)][0] == doctest::Approx(std::cos(theta)));
        CHECK(std::fabs(net8.centers[static_cast<std::size_t>(j)][1]) ==
              doctest::Approx(std::fabs(std::sin(theta))));
    }
    CHECK(build_direction_net(Dimension(2), 1.0 / 256).centers.size() == 805);
}

namespace {

int packing_violations(const DirectionNet& net, double min_angle) {
    int violations = 0;
    for (std::size_t i = 0; i < net.centers.size(); ++i) {
        for (std::size_t j = i + 1; j < net.centers.size(); ++j) {
            if (!(angle_between(net.centers[i], net.centers[j]) > min_angle)) ++violations;
        }
    }
    return violations;
}

double sampled_covering(const DirectionNet& net, int d, int samples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        worst = std::max(worst, nearest_center_angle(net, random_direction(rng, d)));
    }
    return worst;
}

}  // namespace

TEST_CASE("d=2 net packing and covering") {
    const double res = 1.0 / 64;
    const auto net = build_direction_net(Dimension(2), res);
    CHECK(packing_violations(net, res / 2) == 0);
    CHECK(sampled_covering(net, 2, 2000, 3) <= res);
}

TEST_CASE("d=3 net: size window, packing, covering") {
    const double res = 1.0 / 32;
    const auto net = build_direction_net(Dimension(3), res);
    const double target = 1.0 / (res * res);  // 1024
    CHECK(static_cast<double>(net.centers.size()) >= target / 4);
    CHECK(static_cast<double>(net.centers.size()) <= target * 4);
    CHECK(packing_violations(net, res / 2) == 0);
    CHECK(sampled_covering(net, 3, 100000, 5) <= res);
}

TEST_CASE("d=4 net: packing and covering at coarse resolution") {
    const double res = 1.0 / 8;
    const auto net = build_direction_net(Dimension(4), res);
    const double target = std::pow(res, -3.0);
    CHECK(static_cast<double>(net.centers.size()) >= target / 16);
    CHECK(static_cast<double>(net.centers.size()) <= target * 16);
    CHECK(packing_violations(net, res / 2) == 0);
    CHECK(sampled_covering(net, 4, 20000, 9) <= res);
}

TEST_CASE("enumerated family is pairwise distinct on a tiny instance") {
    const double delta = 1.0 / 4;
    const auto fam = enumerate_tubes(build_direction_net(Dimension(2), 1.0 / 2), delta, 1.0 / 2);
    REQUIRE(fam.tubes.size() > 4);
    int violations = 0;
    for (std::size_t i = 0; i < fam.tubes.size(); ++i) {
        for (std::size_t j = i + 1; j < fam.tubes.size(); ++j) {
            if (!tubes_distinct(fam.tubes[i], fam.tubes[j])) ++violations;
        }
        CHECK(tube_body_meets_cube(fam.tubes[i]));
    }
    CHECK(violations == 0);

    // A denser instance, still fully pairwise.
    const auto fam2 = standard_family(Dimension(2), 1.0 / 16);
    violations = 0;
    for (std::size_t i = 0; i < fam2.tubes.size(); ++i) {
        for (std::size_t j = i + 1; j < fam2.tubes.size(); ++j) {
            if (!tubes_distinct(fam2.tubes[i], fam2.tubes[j])) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("enumeration preconditions") {
    const auto net = build_direction_net(Dimension(2), 1.0 / 8);
    CHECK_THROWS(enumerate_tubes(net, 1.0 / 8, 1.0 / 8));   // spacing < 2*delta
    CHECK_THROWS(enumerate_tubes(net, 1.0 / 8, 1.0 / 2));   // net finer than 2*delta
    CHECK_NOTHROW(enumerate_tubes(net, 1.0 / 16, 1.0 / 8));
}

TEST_CASE("family size windows") {
    const auto fam2 = standard_family(Dimension(2), 1.0 / 64);
    const double target2 = 64.0 * 64.0;
    CHECK(static_cast<double>(fam2.tubes.size()) >= target2 / 16);
    CHECK(static_cast<double>(fam2.tubes.size()) <= target2 * 16);

    const auto fam3 = standard_family(Dimension(3), 1.0 / 16);
    const double target3 = std::pow(16.0, 4.0);
    CHECK(static_cast<double>(fam3.tubes.size()) >= target3 / 16);
    CHECK(static_cast<double>(fam3.tubes.size()) <= target3 * 16);
}

TEST_CASE("d=4 family smoke") {
    const auto fam = standard_family(Dimension(4), 1.0 / 4);
    REQUIRE(fam.tubes.size() > 16);
    Rng rng(13);
    int violations = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto a = rng.next_below(fam.tubes.size());
        const auto b = rng.next_below(fam.tubes.size());
        if (a == b) continue;
        if (!tubes_distinct(fam.tubes[a], fam.tubes[b])) ++violations;
        if (!tube_body_meets_cube(fam.tubes[a])) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("family size is monotone non-increasing in offset spacing") {
    const double delta = 1.0 / 32;
    const auto net = build_direction_net(Dimension(2), 2 * delta);
    std::size_t prev = enumerate_tubes(net, delta, 2 * delta).tubes.size();
    for (double spacing : {3 * delta, 4 * delta, 8 * delta}) {
        const std::size_t cur = enumerate_tubes(net, delta, spacing).tubes.size();
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("family covers tubes through interior point pairs within one net step") {
    const double delta = 1.0 / 32;
    const auto fam = standard_family(Dimension(2), delta);
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        Vec p(2), q(2);
        for (int j = 0; j < 2; ++j) {
            p[j] = rng.uniform(0.1, 0.9);
            q[j] = rng.uniform(0.1, 0.9);
        }
        if (distance(p, q) < 0.2) continue;
        const Direction u = Direction::from(q - p);
        const Tube probe = make_tube(u, p, delta);
        bool covered = false;
        for (const auto& t : fam.tubes) {
            if (angle_between(t.direction, probe.direction) > fam.net.angular_resolution) {
                continue;
            }
            Vec diff = probe.anchor - t.anchor;
            diff = diff - t.direction.vec() * diff.dot(t.direction.vec());
            if (diff.norm() <= fam.offset_spacing) {
                covered = true;
                break;
            }
        }
        CHECK(covered);
    }
}

TEST_CASE("tubes through an atom pair scale like 1/x in the plane") {
    const double delta = 1.0 / 256;
    const auto fam = standard_family(Dimension(2), delta);
    const Vec c = cube_center(2);
    Vec u(2);
    u[0] = std::cos(0.37);
    u[1] = std::sin(0.37);

    auto count_at = [&](double x) {
        const Atom a1 = make_atom(c - u * (x / 2), delta);
        const Atom a2 = make_atom(c + u * (x / 2), delta);
        return tubes_through_pair(a1, a2, fam);
    };

    const auto c_half = static_cast<double>(count_at(0.5));
    CHECK(c_half >= 2.0 / 16);
    CHECK(c_half <= 2.0 * 16);
    const auto c_16 = static_cast<double>(count_at(1.0 / 16));
    CHECK(c_16 >= 16.0 / 16);
    CHECK(c_16 <= 16.0 * 16);
}

TEST_CASE("tubes through a pair in d=3") {
    const double delta = 1.0 / 32;
    const auto fam = standard_family(Dimension(3), delta);
    const Vec c = cube_center(3);
    Vec u(3);
    u[0] = 0.2;
    u[1] = 0.3;
    u[2] = 0.93;
    const Direction ud = Direction::from(u);
    const double x = 0.25;
    const Atom a1 = make_atom(c - ud.vec() * (x / 2), delta);
    const Atom a2 = make_atom(c + ud.vec() * (x / 2), delta);
    const auto n = static_cast<double>(tubes_through_pair(a1, a2, fam));
    CHECK(n >= 16.0 / 16);
    CHECK(n <= 16.0 * 16);
}
