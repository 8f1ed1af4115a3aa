#include "scribble/geometry.hpp"

#include <algorithm>

#include "scribble/raster.hpp"

namespace scribble {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    if (len2 == 0.0) {
        return distance(p, a);
    }
    const double t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

double polyline_length(std::span<const Point2> pts, bool closed) {
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        total += distance(pts[i - 1], pts[i]);
    }
    if (closed && pts.size() > 1) {
        total += distance(pts.back(), pts.front());
    }
    return total;
}

Point2 point_at_length(std::span<const Point2> pts, double s) {
    if (pts.empty()) {
        return {};
    }
    if (s <= 0.0) {
        return pts.front();
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double seg = distance(pts[i - 1], pts[i]);
        if (s <= seg && seg > 0.0) {
            return pts[i - 1] + (pts[i] - pts[i - 1]) * (s / seg);
        }
        s -= seg;
    }
    return pts.back();
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

}  // namespace scribble
