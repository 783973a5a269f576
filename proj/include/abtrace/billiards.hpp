#pragma once

// Ray dynamics in the disk / annulus and the linearization of the reflected
// flow (Jacobi frames).

#include "abtrace/linalg.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace abtrace::billiards {

inline constexpr double kTangencyTolerance = 1e-9;

class UnitDirection {
public:
    /// Normalizes `v`; throws std::invalid_argument for a zero vector.
    explicit UnitDirection(const Vec2& v);
    static UnitDirection from_angle(double theta);

    const Vec2& vec() const { return v_; }
    Vec2 perp() const { return abtrace::perp(v_); }
    double angle() const;

private:
    Vec2 v_;
};

/// Disk of radius `outer_radius`, optionally with a concentric circular
/// obstacle of radius `inner_radius` (0 means a bare puncture).
struct Geometry {
    double outer_radius = 1.0;
    double inner_radius = 0.0;

    void validate() const;
    bool has_obstacle() const { return inner_radius > 0.0; }
    bool contains(const Vec2& p) const;
};

enum class Boundary { outer, inner };

struct ReflectionEvent {
    double time;
    Vec2 point;
    Vec2 incoming;
    Vec2 outgoing;
    Boundary boundary;
};

/// Specular reflection at a point `p` of a boundary circle centred at the
/// origin. Throws TangentialHit when |eta . nu| < kTangencyTolerance.
UnitDirection reflect_direction(const UnitDirection& eta, const Vec2& p);

class ReflectedRayPath {
public:
    ReflectedRayPath(Vec2 start, UnitDirection direction, double duration, Geometry geometry,
                     std::vector<ReflectionEvent> events, bool inner_hit);

    const Vec2& start() const { return start_; }
    const UnitDirection& initial_direction() const { return direction_; }
    double duration() const { return duration_; }
    const Geometry& geometry() const { return geometry_; }
    std::span<const ReflectionEvent> reflections() const { return events_; }
    /// True when the ray met the inner circle; such paths are flagged, not rejected.
    bool inner_hit() const { return inner_hit_; }

    /// Signed chord parameter w = z . eta_perp.
    double chord() const { return start_.dot(direction_.perp()); }

    /// Number of reflections with time <= t.
    std::size_t reflections_before(double t) const;
    Vec2 position(double t) const;
    /// Direction after all reflections at times <= t.
    Vec2 direction(double t) const;
    /// Vertices start, reflection points up to t, and x(t).
    std::vector<Vec2> polyline(double t) const;
    /// Smallest |t - t_k| over reflection times.
    double distance_to_reflection(double t) const;

private:
    Vec2 start_;
    UnitDirection direction_;
    double duration_;
    Geometry geometry_;
    std::vector<ReflectionEvent> events_;
    bool inner_hit_;
};

/// Exact piecewise-linear billiard path of length `t_max` from `z` in direction `eta`.
ReflectedRayPath trace_ray(const Vec2& z, const UnitDirection& eta, double t_max,
                           const Geometry& g);

struct PhasePoint {
    Vec2 x;
    Vec2 xi;
    int reflections;
};

/// Flow map (z, eta) -> (x, xi) at time t for arbitrary eta != 0: x is
/// homogeneous of degree 0 and xi of degree 1 in eta.
PhasePoint flow(const Vec2& z, const Vec2& eta, double t, const Geometry& g);

enum class Orientation { counterclockwise, clockwise };

struct OrbitSpec {
    int sides = 3;
    double radius = 1.0;
    Orientation orientation = Orientation::counterclockwise;
    double start_angle = 0.0;

    double side_length() const;
    double length() const;
    double chord_distance() const;
    /// Eigenvalue of dxi/dz along eta_perp at closure: 4N / h_N.
    double closure_curvature() const;
};

struct OrbitRepresentative {
    OrbitSpec spec;
    Vec2 start;
    UnitDirection direction;
    /// Position of `start` along the direction (the v coordinate).
    double offset;
};

/// Regular inscribed N-gon with initial direction angle `start_angle`;
/// the start point is z = offset * eta +/- R cos(pi/N) eta_perp (+ for
/// counterclockwise).
OrbitRepresentative ngon_orbit(int sides, double radius, double start_angle,
                               Orientation orientation, double offset = 0.0);

struct JacobiFrame {
    double time = 0.0;
    Mat2 a = Mat2::Identity(); ///< dx/dz
    Mat2 b = Mat2::Zero();     ///< dx/deta
    Mat2 c = Mat2::Zero();     ///< dxi/dz
    Mat2 d = Mat2::Identity(); ///< dxi/deta

    Mat4 matrix() const;
    CMat2 z() const { return a.cast<Complex>() + kI * b.cast<Complex>(); }
    /// max of ||a^t d - c^t b - I||, ||a^t c - c^t a||, ||b^t d - d^t b||.
    double symplectic_defect() const;
};

struct FrameOptions {
    double step = 1e-5;
    /// frame_at refuses times closer than this to a reflection.
    double reflection_guard = 1e-4;
};

/// Central differences of the exact ray map in (z, eta), one Richardson level.
/// Throws ReflectionAdjacent near reflection times.
JacobiFrame frame_at(const ReflectedRayPath& path, double t, const FrameOptions& options = {});

/// One-sided limit of the frame at reflection `index`, from the affine
/// dependence of (a, b) and constancy of (c, d) on the adjacent segment.
JacobiFrame frame_limit(const ReflectedRayPath& path, std::size_t index, bool after,
                        const FrameOptions& options = {});

using FrameSampler = std::function<JacobiFrame(double)>;

/// Times in (0, duration) where det a(t) = 0, refined to 1e-9.
std::vector<double> focal_times(const ReflectedRayPath& path, const FrameSampler& sampler = {},
                                int samples_per_segment = 32);

struct LengthEntry {
    double length;
    int sides;   ///< N (number of reflections)
    int winding; ///< rotation number q
    int multiplicity;
};

/// Interval that may contain lengths not listed individually: families that
/// enter the obstacle k times, or N-gons with N above the enumeration limit
/// accumulating at 2 pi R q.
struct LengthBand {
    enum class Kind { obstacle, whispering };
    Kind kind;
    int index; ///< k for obstacle bands, q for whispering tails
    double lower;
    double upper;
};

struct LengthSpectrum {
    std::vector<LengthEntry> entries;
    std::vector<LengthBand> bands;
    /// Whispering-gallery limits 2 pi R q <= l_max.
    std::vector<double> accumulation_points;
    int max_sides = 0;

    std::vector<double> values() const;
};

/// N-gons of rotation number q (iterates included) with length <= l_max and
/// N <= max_sides; N-gons whose chords come within r0 of the centre are dropped.
LengthSpectrum length_spectrum(const Geometry& g, double l_max, int max_sides = 40);

} // namespace abtrace::billiards
