#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace feedsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Left-hand normal (rotation by +90 degrees).
constexpr Vec2 perp_left(Vec2 v) { return {-v.y, v.x}; }

inline Vec2 rotated(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

/// Planar pose: position of the rear-axle midpoint plus heading (0 = +x).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;

    constexpr Vec2 position() const { return {x, y}; }
    friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

inline Vec2 world_from_body(const Pose& pose, Vec2 body) {
    return pose.position() + rotated(body, pose.heading);
}

struct Segment {
    Vec2 a;
    Vec2 b;
};

inline double point_segment_distance(Vec2 p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 <= 0.0) return norm(p - s.a);
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return norm(p - (s.a + t * d));
}

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace detail

inline bool segments_intersect(const Segment& s, const Segment& t) {
    const int o1 = detail::orientation(s.a, s.b, t.a);
    const int o2 = detail::orientation(s.a, s.b, t.b);
    const int o3 = detail::orientation(t.a, t.b, s.a);
    const int o4 = detail::orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && detail::on_segment(s.a, s.b, t.a)) return true;
    if (o2 == 0 && detail::on_segment(s.a, s.b, t.b)) return true;
    if (o3 == 0 && detail::on_segment(t.a, t.b, s.a)) return true;
    if (o4 == 0 && detail::on_segment(t.a, t.b, s.b)) return true;
    return false;
}

inline double segment_segment_distance(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) return 0.0;
    double best = point_segment_distance(s.a, t);
    best = std::min(best, point_segment_distance(s.b, t));
    best = std::min(best, point_segment_distance(t.a, s));
    best = std::min(best, point_segment_distance(t.b, s));
    return best;
}

/// Rectangle with arbitrary heading; half_length along the heading axis.
struct OrientedRect {
    Vec2 center;
    double half_length = 0.0;
    double half_width = 0.0;
    double heading = 0.0;

    std::array<Vec2, 4> corners() const {
        return {world_from_body({center.x, center.y, heading}, {half_length, half_width}),
                world_from_body({center.x, center.y, heading}, {-half_length, half_width}),
                world_from_body({center.x, center.y, heading}, {-half_length, -half_width}),
                world_from_body({center.x, center.y, heading}, {half_length, -half_width})};
    }
};

/// Signed clearance between a rectangle and a segment: positive separation
/// distance when disjoint, negative penetration estimate when overlapping.
inline double rect_segment_clearance(const OrientedRect& r, const Segment& seg) {
    const Vec2 a = rotated(seg.a - r.center, -r.heading);
    const Vec2 b = rotated(seg.b - r.center, -r.heading);
    const double hx = r.half_length;
    const double hy = r.half_width;
    const Vec2 d = b - a;

    // Liang-Barsky clip of the segment against the axis-aligned box.
    double t0 = 0.0;
    double t1 = 1.0;
    bool feasible = true;
    auto clip = [&](double p, double q) {
        if (p == 0.0) {
            if (q < 0.0) feasible = false;
            return;
        }
        const double t = q / p;
        if (p < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
    };
    clip(d.x, hx - a.x);
    clip(-d.x, hx + a.x);
    clip(d.y, hy - a.y);
    clip(-d.y, hy + a.y);

    if (feasible && t0 <= t1) {
        auto inner_depth = [&](double t) {
            const Vec2 p = a + t * d;
            return std::min(hx - std::abs(p.x), hy - std::abs(p.y));
        };
        // Depth along the clipped segment is concave, so a ternary search
        // finds the deepest penetration exactly.
        double lo = t0;
        double hi = t1;
        for (int i = 0; i < 80; ++i) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (inner_depth(m1) < inner_depth(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        const double depth = std::max({inner_depth(t0), inner_depth(t1), inner_depth(lo)});
        return -depth;
    }

    const std::array<Vec2, 4> c = {Vec2{hx, hy}, Vec2{-hx, hy}, Vec2{-hx, -hy}, Vec2{hx, -hy}};
    const Segment local{a, b};
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        best = std::min(best, segment_segment_distance({c[i], c[(i + 1) % 4]}, local));
    }
    return best;
}

}  // namespace feedsim
