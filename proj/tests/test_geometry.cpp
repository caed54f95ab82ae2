#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tubelab/geometry.hpp"
#include "tubelab/rng.hpp"

using namespace tubelab;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}

Direction dir2(double x, double y) { return Direction::from(v2(x, y)); }

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

// One of the 2^d * d! symmetries of the cube: a coordinate permutation
// followed by per-axis reflections x -> 1-x.
struct CubeSymmetry {
    std::array<int, kMaxDim> perm{};
    std::array<bool, kMaxDim> flip{};
    int d = 2;

    Vec apply_point(const Vec& p) const {
        Vec q(d);
        for (int i = 0; i < d; ++i) {
            double x = p[perm[static_cast<std::size_t>(i)]];
            q[i] = flip[static_cast<std::size_t>(i)] ? 1.0 - x : x;
        }
        return q;
    }
    Vec apply_vector(const Vec& u) const {
        Vec q(d);
        for (int i = 0; i < d; ++i) {
            double x = u[perm[static_cast<std::size_t>(i)]];
            q[i] = flip[static_cast<std::size_t>(i)] ? -x : x;
        }
        return q;
    }
};

std::vector<CubeSymmetry> cube_symmetries(int d) {
    std::array<int, kMaxDim> perm{};
    for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::vector<CubeSymmetry> out;
    do {
        for (int mask = 0; mask < (1 << d); ++mask) {
            CubeSymmetry s;
            s.perm = perm;
            s.d = d;
            for (int i = 0; i < d; ++i) s.flip[static_cast<std::size_t>(i)] = (mask >> i) & 1;
            out.push_back(s);
        }
    } while (std::next_permutation(perm.begin(), perm.begin() + d));
    return out;
}

}  // namespace

TEST_CASE("dimension bounds") {
    CHECK_THROWS(Dimension(1));
    CHECK_THROWS(Dimension(5));
    CHECK(Dimension(3).value() == 3);
}

TEST_CASE("angle_between basics") {
    CHECK(angle_between(dir2(1, 0), dir2(1, 0)) == 0.0);
    CHECK(angle_between(dir2(1, 0), dir2(0, 1)) == doctest::Approx(M_PI / 2));
    const Direction a = dir2(1, 0);
    const Direction b = dir2(std::cos(0.01), std::sin(0.01));
    CHECK(std::fabs(angle_between(a, b) - 0.01) < 1e-9);
    // Antipodal identification.
    CHECK(angle_between(dir2(1, 0), Direction::from(v2(-1, 1e-14))) < 1e-9);
}

TEST_CASE("angle_between is symmetric and satisfies the triangle inequality") {
    Rng rng(42);
    for (int d = 2; d <= 4; ++d) {
        for (int i = 0; i < 200; ++i) {
            const Direction a = random_direction(rng, d);
            const Direction b = random_direction(rng, d);
            const Direction c = random_direction(rng, d);
            CHECK(angle_between(a, b) == angle_between(b, a));
            CHECK(angle_between(a, c) <= angle_between(a, b) + angle_between(b, c) + 1e-12);
        }
    }
}

TEST_CASE("direction canonical form") {
    const Direction u = Direction::from(v2(-3, -4));
    CHECK(u[1] > 0.0);  // last nonzero component positive
    CHECK(std::fabs(u.vec().norm() - 1.0) < 1e-12);
    Vec zero(2);
    CHECK_THROWS(Direction::from(zero));
}

TEST_CASE("atom_tube_incident examples") {
    const double delta = 1.0 / 8;
    const Tube t = make_tube(dir2(1, 0), v2(0.5, 0.5), delta);

    CHECK(atom_tube_incident(make_atom(v2(0.3, 0.5), delta), t));  // centre on the axis
    CHECK_FALSE(atom_tube_incident(make_atom(v2(0.5, 0.5 + 3 * delta), delta), t));
    CHECK(atom_tube_incident(make_atom(v2(0.5, 0.5 + 0.9 * delta), delta), t));
    // Boundary: distance exactly (diameter+width)/2 counts as incident.
    CHECK(atom_tube_incident(make_atom(v2(0.5, 0.5 + delta), delta), t));
}

TEST_CASE("atoms_distinct examples") {
    const double delta = 0.1;
    const Atom a = make_atom(v2(0.5, 0.5), delta);
    CHECK_FALSE(atoms_distinct(a, a));
    CHECK(atoms_distinct(a, make_atom(v2(0.5 + 2 * delta, 0.5), delta)));
    CHECK_FALSE(atoms_distinct(a, make_atom(v2(0.5 + delta, 0.5), delta)));  // touching
}

TEST_CASE("tubes_distinct examples") {
    const double delta = 1.0 / 8;
    const Tube t1 = make_tube(dir2(1, 0), v2(0.5, 0.25), delta);
    const Tube t2 = make_tube(dir2(1, 0), v2(0.5, 0.75), delta);
    CHECK_FALSE(tubes_distinct(t1, t1));
    CHECK(tubes_distinct(t1, t2));  // parallel, far apart
    const Tube t3 = make_tube(Direction::from(v2(std::cos(2 * delta), std::sin(2 * delta))),
                              v2(0.5, 0.25), delta);
    CHECK(tubes_distinct(t1, t3));  // angle 2*delta > delta
    CHECK(tubes_distinct(t3, t1));  // symmetric
    const Tube t4 = make_tube(Direction::from(v2(std::cos(delta / 2), std::sin(delta / 2))),
                              v2(0.5, 0.25), delta);
    CHECK_FALSE(tubes_distinct(t1, t4));  // small angle, overlapping bodies
}

TEST_CASE("tubes_distinct is symmetric") {
    Rng rng(29);
    const double delta = 1.0 / 16;
    for (int d = 2; d <= 3; ++d) {
        for (int i = 0; i < 200; ++i) {
            auto sample = [&] {
                for (;;) {
                    const Direction u = random_direction(rng, d);
                    Vec p(d);
                    for (int j = 0; j < d; ++j) p[j] = rng.uniform(0.0, 1.0);
                    if (auto t = try_make_tube(u, p, delta)) return *t;
                }
            };
            const Tube a = sample(), b = sample();
            CHECK(tubes_distinct(a, b) == tubes_distinct(b, a));
        }
    }
}

TEST_CASE("tube canonical anchor") {
    Rng rng(7);
    for (int d = 2; d <= 4; ++d) {
        const Vec c = cube_center(d);
        for (int i = 0; i < 100; ++i) {
            const Direction u = random_direction(rng, d);
            Vec p(d);
            for (int j = 0; j < d; ++j) p[j] = rng.uniform(0.1, 0.9);
            const Tube t = make_tube(u, p, 1.0 / 16);
            CHECK(std::fabs((t.anchor - c).dot(u.vec())) < kAnchorOrthoTol);
        }
    }
    CHECK_THROWS(make_tube(dir2(1, 0), v2(0.5, 5.0), 1.0 / 16));  // axis misses the cube
}

TEST_CASE("incidence is invariant under cube symmetries") {
    Rng rng(11);
    for (int d = 2; d <= 3; ++d) {
        const auto syms = cube_symmetries(d);
        const double delta = 1.0 / 16;
        for (int i = 0; i < 25; ++i) {
            Vec c(d);
            for (int j = 0; j < d; ++j) c[j] = rng.uniform(0.05, 0.95);
            const Atom a = make_atom(c, delta);
            const Tube t = [&] {
                for (;;) {
                    const Direction u = random_direction(rng, d);
                    Vec p(d);
                    for (int j = 0; j < d; ++j) p[j] = rng.uniform(0.0, 1.0);
                    if (auto tt = try_make_tube(u, p, delta)) return *tt;
                }
            }();
            const bool base = atom_tube_incident(a, t);
            for (const auto& s : syms) {
                const Atom a2 = make_atom(s.apply_point(a.center), delta);
                const Tube t2 = make_tube(Direction::from(s.apply_vector(t.direction.vec())),
                                          s.apply_point(t.anchor), delta);
                CHECK(atom_tube_incident(a2, t2) == base);
            }
        }
    }
}

TEST_CASE("no incidence beyond the combined radius") {
    Rng rng(13);
    const double delta = 1.0 / 32;
    for (int d = 2; d <= 3; ++d) {
        for (int i = 0; i < 200; ++i) {
            const Tube t = [&] {
                for (;;) {
                    const Direction u = random_direction(rng, d);
                    Vec p(d);
                    for (int j = 0; j < d; ++j) p[j] = rng.uniform(0.0, 1.0);
                    if (auto tt = try_make_tube(u, p, delta)) return *tt;
                }
            }();
            const auto seg = clipped_axis(t);
            REQUIRE(seg.has_value());
            // Pick a point on the segment, step away beyond the combined
            // radius plus a positive margin.
            const double s = rng.next_double();
            const Vec q = seg->a + (seg->b - seg->a) * s;
            const Direction off = random_direction(rng, d);
            const double margin = rng.uniform(1e-6, 0.2);
            Vec c = q + off.vec() * (delta + margin);
            bool inside = true;
            for (int j = 0; j < d; ++j) inside = inside && c[j] >= 0.0 && c[j] <= 1.0;
            if (!inside) continue;
            const Atom a = make_atom(c, delta);
            if (point_segment_distance(a.center, *seg) > delta) {
                CHECK_FALSE(atom_tube_incident(a, t));
            }
        }
    }
}

TEST_CASE("line_box_distance matches dense sampling") {
    Rng rng(17);
    for (int d = 2; d <= 3; ++d) {
        for (int i = 0; i < 50; ++i) {
            const Direction u = random_direction(rng, d);
            Vec p(d);
            for (int j = 0; j < d; ++j) p[j] = rng.uniform(-1.0, 2.0);
            const double exact = line_box_distance(p, u.vec(), 0.0, 1.0);
            double sampled = 1e300;
            for (int s = -4000; s <= 4000; ++s) {
                const Vec q = p + u.vec() * (s * 1e-3);
                double acc = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double e = q[j] < 0.0 ? -q[j] : (q[j] > 1.0 ? q[j] - 1.0 : 0.0);
                    acc += e * e;
                }
                sampled = std::min(sampled, std::sqrt(acc));
            }
            CHECK(exact <= sampled + 1e-12);
            CHECK(sampled <= exact + 1e-3);
        }
    }
}

TEST_CASE("segment distance basics") {
    const Segment s1{v2(0, 0), v2(1, 0)};
    const Segment s2{v2(0, 1), v2(1, 1)};
    CHECK(segment_segment_distance(s1, s2) == doctest::Approx(1.0));
    const Segment s3{v2(0.5, -1), v2(0.5, 1)};
    CHECK(segment_segment_distance(s1, s3) == doctest::Approx(0.0));
    const Segment s4{v2(2, 0), v2(3, 0)};
    CHECK(segment_segment_distance(s1, s4) == doctest::Approx(1.0));
    CHECK(point_segment_distance(v2(2, 0), s1) == doctest::Approx(1.0));
    CHECK(point_segment_distance(v2(0.5, 0.3), s1) == doctest::Approx(0.3));
}
