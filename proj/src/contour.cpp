#include "scribble/contour.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "scribble/tracking.hpp"

namespace scribble {

namespace {

struct Step {
    int dx, dy;
};

// Neighbor offsets in on-screen counter-clockwise order, starting west.
constexpr std::array<Step, 8> kRing = {{{-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}}};

int ring_index(int dx, int dy) {
    for (int i = 0; i < 8; ++i) {
        if (kRing[static_cast<std::size_t>(i)].dx == dx && kRing[static_cast<std::size_t>(i)].dy == dy) return i;
    }
    return -1;
}

struct Pixel {
    int x, y;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

void rdp(const Polyline& pts, std::size_t first, std::size_t last, double epsilon, std::vector<bool>& keep) {
    if (last <= first + 1) return;
    double best = -1.0;
    std::size_t best_i = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double d = point_segment_distance(pts[i], pts[first], pts[last]);
        if (d > best) {
            best = d;
            best_i = i;
        }
    }
    if (best > epsilon) {
        keep[best_i] = true;
        rdp(pts, first, best_i, epsilon, keep);
        rdp(pts, best_i, last, epsilon, keep);
    }
}

}  // namespace

ContourPolyline extract_outer_contour(const BinaryMask& mask, std::int64_t source_frame) {
    const ComponentLabels labels = label_components(mask);
    const Component* best = labels.largest();
    if (!best) {
        throw Error("empty-mask");
    }
    const int w = labels.width;
    const int h = labels.height;
    auto inside = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < w && y < h &&
               labels.labels[static_cast<std::size_t>(y) * w + x] == best->label;
    };

    // Topmost row of the component, leftmost pixel in it.
    Pixel start{best->min_x, best->min_y};
    while (!inside(start.x, start.y)) ++start.x;

    ContourPolyline out;
    out.source_frame = source_frame;
    out.points.push_back({static_cast<double>(start.x), static_cast<double>(start.y)});

    // Find the next boundary pixel scanning CCW from the backtrack direction.
    auto advance = [&](Pixel cur, int back) -> std::pair<Pixel, int> {
        for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            const Pixel n{cur.x + kRing[static_cast<std::size_t>(d)].dx, cur.y + kRing[static_cast<std::size_t>(d)].dy};
            if (inside(n.x, n.y)) {
                const int prev = (d + 7) % 8;
                const Pixel p{cur.x + kRing[static_cast<std::size_t>(prev)].dx,
                              cur.y + kRing[static_cast<std::size_t>(prev)].dy};
                return {n, ring_index(p.x - n.x, p.y - n.y)};
            }
        }
        return {cur, -1};
    };

    // West of the start pixel is never part of the component.
    auto [second, second_back] = advance(start, 0);
    if (second_back < 0) {
        return out;  // isolated pixel
    }

    Pixel cur = second;
    int back = second_back;
    const std::size_t limit = 4 * labels.labels.size() + 8;
    for (std::size_t guard = 0; guard < limit; ++guard) {
        if (cur == start) {
            auto [n, b] = advance(cur, back);
            if (n == second) break;
            out.points.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
            cur = n;
            back = b;
            continue;
        }
        out.points.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
        auto [n, b] = advance(cur, back);
        cur = n;
        back = b;
    }
    return out;
}

ContourPolyline simplify_polyline(const ContourPolyline& poly, double epsilon) {
    ContourPolyline out;
    out.source_frame = poly.source_frame;

    Polyline pts;
    pts.reserve(poly.points.size());
    for (const Point2& p : poly.points) {
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
    while (pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();
    if (pts.size() < 3) {
        out.points = std::move(pts);
        return out;
    }

    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = distance(pts[0], pts[i]);
        if (d > far_d) {
            far_d = d;
            far = i;
        }
    }

    // Close the ring so the second half runs far .. n (== vertex 0).
    Polyline closed = pts;
    closed.push_back(pts.front());
    std::vector<bool> keep(closed.size(), false);
    keep[0] = true;
    keep[far] = true;
    rdp(closed, 0, far, epsilon, keep);
    rdp(closed, far, closed.size() - 1, epsilon, keep);

    for (std::size_t i = 0; i + 1 < closed.size(); ++i) {
        if (keep[i]) out.points.push_back(closed[i]);
    }
    return out;
}

Polyline contour_window(const ContourPolyline& poly, double t, const AnimatedContour& style) {
    const Polyline& pts = poly.points;
    const std::size_t n = pts.size();
    if (n == 0) return {};
    if (style.window_fraction >= 1.0 || n == 1) {
        Polyline full = pts;
        full.push_back(pts.front());
        return full;
    }

    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cum[i + 1] = cum[i] + distance(pts[i], pts[(i + 1) % n]);
    }
    const double perimeter = cum[n];
    if (perimeter <= 0.0) return {pts.front()};

    double phase = std::fmod(t * style.cycles_per_second, 1.0);
    if (phase < 0.0) phase += 1.0;
    const double begin = phase * perimeter;
    const double end = begin + style.window_fraction * perimeter;

    auto point_at = [&](double a) {
        const double lap = std::floor(a / perimeter);
        double s = a - lap * perimeter;
        for (std::size_t i = 0; i < n; ++i) {
            const double seg = cum[i + 1] - cum[i];
            if (s <= cum[i + 1] && seg > 0.0) {
                return pts[i] + (pts[(i + 1) % n] - pts[i]) * ((s - cum[i]) / seg);
            }
        }
        return pts.front();
    };

    Polyline out;
    out.push_back(point_at(begin));
    for (int lap = 0; lap < 2; ++lap) {
        for (std::size_t i = 0; i < n; ++i) {
            const double pos = cum[i] + lap * perimeter;
            if (pos > begin && pos < end) out.push_back(pts[i]);
        }
    }
    out.push_back(point_at(end));
    return out;
}

RasterFill fill_region(const BinaryMask& mask, Rgba color) {
    BinaryMask region = largest_component_mask(mask);
    if (region.empty()) {
        throw Error("empty-mask");
    }
    return {std::move(region), color};
}

}  // namespace scribble
