#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace scribble {

/// Screen-space point in source-frame pixels. Origin top-left, y grows downward.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

using Polyline = std::vector<Point2>;

/// Distance from p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Sum of segment lengths; when `closed`, includes the segment back to the first point.
double polyline_length(std::span<const Point2> pts, bool closed = false);

/// Point at arc length `s` along an open polyline, clamped to its ends.
Point2 point_at_length(std::span<const Point2> pts, double s);

struct Rgba {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 255;

    friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// Uniform scale followed by translation: p' = scale * p + offset.
struct Transform {
    double scale = 1.0;
    Point2 offset{};

    Point2 apply(Point2 p) const { return p * scale + offset; }

    /// `this` applied after `inner`.
    Transform after(const Transform& inner) const {
        return {scale * inner.scale, inner.offset * scale + offset};
    }

    static Transform translation(Point2 d) { return {1.0, d}; }

    friend bool operator==(const Transform&, const Transform&) = default;
};

}  // namespace scribble
