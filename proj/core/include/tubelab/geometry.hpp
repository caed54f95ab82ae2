#pragma once
/**
 * @file geometry.hpp
 * @brief Value types and exact predicates for delta-atoms and delta-tubes in [0,1]^d.
 *
 * An atom is a closed Euclidean ball of diameter delta inside the unit cube.
 * A tube is the delta/2-neighbourhood of a line, clipped to the unit cube.
 * Tubes are kept in a canonical form: a unit direction whose last nonzero
 * component is positive (antipodal identification), and the anchor is the
 * closest point of the axis line to the cube centre.
 *
 * All predicates compare computed distances exactly (no epsilon slack), so a
 * brute-force oracle and an indexed engine built on top of them agree
 * bit-for-bit.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tubelab {

inline constexpr int kMaxDim = 4;
inline constexpr double kUnitNormTol = 1e-12;   // direction normalisation tolerance
inline constexpr double kAnchorOrthoTol = 1e-10; // anchor-vs-direction orthogonality tolerance

/// Ambient dimension, restricted to 2..4.
class Dimension {
public:
    explicit Dimension(int d);
    int value() const { return d_; }
    operator int() const { return d_; }

private:
    int d_;
};

/// Small fixed-capacity vector in R^d, d <= 4.
class Vec {
public:
    Vec() = default;
    explicit Vec(int dim);
    Vec(int dim, std::array<double, kMaxDim> coords);

    int dim() const { return d_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    Vec operator+(const Vec& r) const;
    Vec operator-(const Vec& r) const;
    Vec operator*(double s) const;
    friend Vec operator*(double s, const Vec& v) { return v * s; }

    double dot(const Vec& r) const;
    double norm2() const { return dot(*this); }
    double norm() const;

    bool operator==(const Vec& r) const;

private:
    std::array<double, kMaxDim> c_{};
    int d_ = 0;
};

double distance(const Vec& a, const Vec& b);

/// Centre of the unit cube, (1/2, ..., 1/2).
Vec cube_center(int d);

/// True iff every coordinate lies in [0,1].
bool in_unit_cube(const Vec& p);

/// Canonical unit direction: Euclidean norm 1, last nonzero component positive.
class Direction {
public:
    /// Normalises and canonicalises. Throws std::invalid_argument on a zero
    /// or non-finite vector.
    static Direction from(const Vec& v);

    /// Accepts an already-canonical unit vector verbatim (bit-exact, used by
    /// deserialisation). Throws unless the norm is within 1e-12 of 1.
    static Direction from_unit(const Vec& v);

    const Vec& vec() const { return u_; }
    int dim() const { return u_.dim(); }
    double operator[](int i) const { return u_[i]; }

private:
    explicit Direction(Vec u) : u_(u) {}
    Vec u_;
};

/// Angle between two directions under antipodal identification:
/// arccos(|<a,b>|), clamped to [0, pi/2].
double angle_between(const Direction& a, const Direction& b);

/// Closed ball of diameter `diameter` centred at `center`, with a positive
/// integer weight (weight 1 unless the set has been thickened).
struct Atom {
    Vec center;
    double diameter = 0.0;
    std::int64_t weight = 1;
};

/// Validating constructor: centre in the cube, 0 < diameter < 1, weight >= 1.
Atom make_atom(const Vec& center, double diameter, std::int64_t weight = 1);

/// delta/2-neighbourhood of the line {anchor + t * direction}, clipped to the
/// unit cube. The anchor is the closest point of the axis line to the cube
/// centre, hence orthogonal to the direction relative to the centre.
struct Tube {
    Direction direction;
    Vec anchor;
    double width = 0.0;
    std::int64_t weight = 1;
};

/// Builds the canonical tube through `point_on_axis` in direction `u`.
/// Throws std::invalid_argument unless the axis line meets the closed unit
/// cube expanded by width/2 on every face.
Tube make_tube(const Direction& u, const Vec& point_on_axis, double width,
               std::int64_t weight = 1);

/// As make_tube but returns nullopt instead of throwing when the axis misses
/// the expanded cube.
std::optional<Tube> try_make_tube(const Direction& u, const Vec& point_on_axis,
                                  double width, std::int64_t weight = 1);

/// Canonicalises without the meets-the-cube check. Used where derived tubes
/// (thickened or rescaled) must be kept even when their body is empty.
Tube make_tube_unchecked(const Direction& u, const Vec& point_on_axis, double width,
                         std::int64_t weight = 1);

struct Segment {
    Vec a;
    Vec b;
};

/// Axis of `t` clipped to the unit cube expanded by width/2 on every face.
/// Empty when the axis misses the expanded cube (the tube has no body).
std::optional<Segment> clipped_axis(const Tube& t);

double point_segment_distance(const Vec& p, const Segment& s);
double segment_segment_distance(const Segment& s, const Segment& t);

/// Exact Euclidean distance from the line {p + t*u} to the axis-aligned box
/// [lo,hi]^d (same lo/hi on every axis).
double line_box_distance(const Vec& p, const Vec& u, double lo, double hi);

/// True iff the tube body (points of the unit cube within width/2 of the
/// axis line) is nonempty.
bool tube_body_meets_cube(const Tube& t);

/// Incidence: nonempty intersection between atom and tube, evaluated as
/// distance from the atom centre to the clipped axis segment being at most
/// (diameter + width) / 2.
bool atom_tube_incident(const Atom& a, const Tube& t);

/// Two atoms of equal diameter are distinct iff the closed balls do not
/// intersect: centre distance strictly greater than the diameter.
bool atoms_distinct(const Atom& a, const Atom& b);

/// Two tubes of equal width are distinct iff the angle between them exceeds
/// the width, or they are parallel-ish but certifiably disjoint inside the
/// cube (clipped axis segments more than one width apart).
bool tubes_distinct(const Tube& a, const Tube& b);

}  // namespace tubelab
