#include "tubelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tubelab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Dimension::Dimension(int d) : d_(d) {
    if (d < 2 || d > kMaxDim) {
        throw std::invalid_argument("dimension must lie in [2, 4], got " + std::to_string(d));
    }
}

Vec::Vec(int dim) : d_(dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw std::invalid_argument("vector dimension must lie in [1, 4]");
    }
}

Vec::Vec(int dim, std::array<double, kMaxDim> coords) : c_(coords), d_(dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw std::invalid_argument("vector dimension must lie in [1, 4]");
    }
}

Vec Vec::operator+(const Vec& r) const {
    Vec out(d_);
    for (int i = 0; i < d_; ++i) out[i] = (*this)[i] + r[i];
    return out;
}

Vec Vec::operator-(const Vec& r) const {
    Vec out(d_);
    for (int i = 0; i < d_; ++i) out[i] = (*this)[i] - r[i];
    return out;
}

Vec Vec::operator*(double s) const {
    Vec out(d_);
    for (int i = 0; i < d_; ++i) out[i] = (*this)[i] * s;
    return out;
}

double Vec::dot(const Vec& r) const {
    double acc = 0.0;
    for (int i = 0; i < d_; ++i) acc += (*this)[i] * r[i];
    return acc;
}

double Vec::norm() const { return std::sqrt(norm2()); }

bool Vec::operator==(const Vec& r) const {
    if (d_ != r.d_) return false;
    for (int i = 0; i < d_; ++i) {
        if ((*this)[i] != r[i]) return false;
    }
    return true;
}

double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

Vec cube_center(int d) {
    Vec c(d);
    for (int i = 0; i < d; ++i) c[i] = 0.5;
    return c;
}

bool in_unit_cube(const Vec& p) {
    for (int i = 0; i < p.dim(); ++i) {
        if (p[i] < 0.0 || p[i] > 1.0) return false;
    }
    return true;
}

Direction Direction::from(const Vec& v) {
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("direction requires a nonzero finite vector");
    }
    Vec u = v * (1.0 / n);
    // Antipodal identification: flip so the last nonzero component is positive.
    for (int i = u.dim() - 1; i >= 0; --i) {
        if (u[i] != 0.0) {
            if (u[i] < 0.0) u = u * -1.0;
            break;
        }
    }
    return Direction(u);
}

Direction Direction::from_unit(const Vec& v) {
    if (std::fabs(v.norm() - 1.0) > kUnitNormTol) {
        throw std::invalid_argument("from_unit requires a unit vector");
    }
    Vec u = v;
    for (int i = u.dim() - 1; i >= 0; --i) {
        if (u[i] != 0.0) {
            if (u[i] < 0.0) u = u * -1.0;
            break;
        }
    }
    return Direction(u);
}

double angle_between(const Direction& a, const Direction& b) {
    double c = std::fabs(a.vec().dot(b.vec()));
    c = std::min(1.0, c);
    return std::acos(c);
}

Atom make_atom(const Vec& center, double diameter, std::int64_t weight) {
    if (!(diameter > 0.0 && diameter < 1.0)) {
        throw std::invalid_argument("atom diameter must lie in (0, 1)");
    }
    if (weight < 1) {
        throw std::invalid_argument("atom weight must be a positive integer");
    }
    if (!in_unit_cube(center)) {
        throw std::invalid_argument("atom center must lie in the unit cube");
    }
    return Atom{center, diameter, weight};
}

namespace {

// Clips the line {p + t*u} against the box [lo,hi]^d. Returns the parameter
// interval, or nullopt when the line misses the box.
std::optional<std::pair<double, double>> clip_line_to_box(const Vec& p, const Vec& u,
                                                          double lo, double hi) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.dim(); ++i) {
        if (u[i] == 0.0) {
            if (p[i] < lo || p[i] > hi) return std::nullopt;
            continue;
        }
        double t0 = (lo - p[i]) / u[i];
        double t1 = (hi - p[i]) / u[i];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return std::nullopt;
    }
    return std::make_pair(tmin, tmax);
}

Vec closest_axis_point_to_center(const Direction& u, const Vec& point_on_axis) {
    const Vec c = cube_center(point_on_axis.dim());
    double t = (c - point_on_axis).dot(u.vec());
    return point_on_axis + u.vec() * t;
}

}  // namespace

std::optional<Tube> try_make_tube(const Direction& u, const Vec& point_on_axis,
                                  double width, std::int64_t weight) {
    if (!(width > 0.0 && width < 1.0)) return std::nullopt;
    if (weight < 1) return std::nullopt;
    Vec anchor = closest_axis_point_to_center(u, point_on_axis);
    double r = width / 2.0;
    if (!clip_line_to_box(anchor, u.vec(), -r, 1.0 + r)) return std::nullopt;
    return Tube{u, anchor, width, weight};
}

Tube make_tube_unchecked(const Direction& u, const Vec& point_on_axis, double width,
                         std::int64_t weight) {
    return Tube{u, closest_axis_point_to_center(u, point_on_axis), width, weight};
}

Tube make_tube(const Direction& u, const Vec& point_on_axis, double width,
               std::int64_t weight) {
    if (!(width > 0.0 && width < 1.0)) {
        throw std::invalid_argument("tube width must lie in (0, 1)");
    }
    if (weight < 1) {
        throw std::invalid_argument("tube weight must be a positive integer");
    }
    auto t = try_make_tube(u, point_on_axis, width, weight);
    if (!t) {
        throw std::invalid_argument("tube axis misses the unit cube expanded by width/2");
    }
    return *t;
}

std::optional<Segment> clipped_axis(const Tube& t) {
    double r = t.width / 2.0;
    auto range = clip_line_to_box(t.anchor, t.direction.vec(), -r, 1.0 + r);
    if (!range) return std::nullopt;
    return Segment{t.anchor + t.direction.vec() * range->first,
                   t.anchor + t.direction.vec() * range->second};
}

double point_segment_distance(const Vec& p, const Segment& s) {
    const Vec d = s.b - s.a;
    const double len2 = d.norm2();
    if (len2 == 0.0) return distance(p, s.a);
    double t = (p - s.a).dot(d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.a + d * t);
}

double segment_segment_distance(const Segment& s, const Segment& t) {
    // Closest points between segments (Ericson, Real-Time Collision Detection).
    const Vec d1 = s.b - s.a;
    const Vec d2 = t.b - t.a;
    const Vec r = s.a - t.a;
    const double a = d1.norm2();
    const double e = d2.norm2();
    const double f = d2.dot(r);

    double sp = 0.0, tp = 0.0;
    if (a == 0.0 && e == 0.0) {
        return distance(s.a, t.a);
    }
    if (a == 0.0) {
        tp = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e == 0.0) {
            sp = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            if (denom > 0.0) {
                sp = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            }
            tp = (b * sp + f) / e;
            if (tp < 0.0) {
                tp = 0.0;
                sp = std::clamp(-c / a, 0.0, 1.0);
            } else if (tp > 1.0) {
                tp = 1.0;
                sp = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return distance(s.a + d1 * sp, t.a + d2 * tp);
}

double line_box_distance(const Vec& p, const Vec& u, double lo, double hi) {
    // dist^2(p + t*u, box) is a convex piecewise quadratic in t; evaluate the
    // candidate minima at every face-crossing breakpoint and between them.
    const int d = p.dim();
    std::array<double, 2 * kMaxDim + 4> breaks{};
    int nb = 0;
    for (int i = 0; i < d; ++i) {
        if (u[i] != 0.0) {
            breaks[static_cast<std::size_t>(nb++)] = (lo - p[i]) / u[i];
            breaks[static_cast<std::size_t>(nb++)] = (hi - p[i]) / u[i];
        }
    }
    std::sort(breaks.begin(), breaks.begin() + nb);
    if (nb > 0) {
        // Sentinels: the active face set is constant beyond the outermost
        // crossings, so one extra interval on each side covers all of R.
        const double span = 10.0 * (1.0 + breaks[static_cast<std::size_t>(nb - 1)] - breaks[0]);
        for (int i = nb; i > 0; --i) breaks[static_cast<std::size_t>(i)] = breaks[static_cast<std::size_t>(i - 1)];
        breaks[0] = breaks[1] - span;
        breaks[static_cast<std::size_t>(nb + 1)] = breaks[static_cast<std::size_t>(nb)] + span;
        nb += 2;
    }

    auto excess = [&](double x) { return x < lo ? lo - x : (x > hi ? x - hi : 0.0); };
    auto dist2_at = [&](double t) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            double e = excess(p[i] + t * u[i]);
            acc += e * e;
        }
        return acc;
    };
    // Unconstrained quadratic minimum on the interval (tl, tr): the active
    // face set is fixed there, so solve the one-dimensional least squares.
    auto interval_min = [&](double tl, double tr) {
        double tm = 0.5 * (tl + tr);
        double qa = 0.0, qb = 0.0;  // sum of (u_i)^2 and residual*u_i over active axes
        for (int i = 0; i < d; ++i) {
            double x = p[i] + tm * u[i];
            if (x < lo) {
                qa += u[i] * u[i];
                qb += (p[i] - lo) * u[i];
            } else if (x > hi) {
                qa += u[i] * u[i];
                qb += (p[i] - hi) * u[i];
            }
        }
        if (qa == 0.0) return dist2_at(tm);  // inside the box on this interval
        double tstar = std::clamp(-qb / qa, tl, tr);
        return dist2_at(tstar);
    };

    double best = std::numeric_limits<double>::infinity();
    if (nb == 0) {
        // Line axis-degenerate in every coordinate it moves through: constant excess.
        return std::sqrt(dist2_at(0.0));
    }
    for (int i = 0; i < nb; ++i) best = std::min(best, dist2_at(breaks[static_cast<std::size_t>(i)]));
    for (int i = 0; i + 1 < nb; ++i) {
        best = std::min(best, interval_min(breaks[static_cast<std::size_t>(i)],
                                           breaks[static_cast<std::size_t>(i + 1)]));
    }
    // Outermost intervals: the excess is nondecreasing moving away from the box,
    // so the boundary breakpoints already cover them.
    return std::sqrt(best);
}

bool tube_body_meets_cube(const Tube& t) {
    return line_box_distance(t.anchor, t.direction.vec(), 0.0, 1.0) <= t.width / 2.0;
}

bool atom_tube_incident(const Atom& a, const Tube& t) {
    auto seg = clipped_axis(t);
    if (!seg) return false;
    return point_segment_distance(a.center, *seg) <= (a.diameter + t.width) / 2.0;
}

bool atoms_distinct(const Atom& a, const Atom& b) {
    return distance(a.center, b.center) > a.diameter;
}

bool tubes_distinct(const Tube& a, const Tube& b) {
    if (angle_between(a.direction, b.direction) > a.width) return true;
    auto sa = clipped_axis(a);
    auto sb = clipped_axis(b);
    if (!sa || !sb) return true;  // a bodiless tube is vacuously disjoint
    return segment_segment_distance(*sa, *sb) > a.width;
}

}  // namespace tubelab
