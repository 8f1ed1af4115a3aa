#pragma once

// Reference implementations written independently of src/, used only by tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "scribble/geometry.hpp"
#include "scribble/raster.hpp"

namespace oracle {

using scribble::BinaryMask;
using scribble::Point2;

struct Blob {
    std::vector<std::pair<int, int>> pixels;
    int min_x = 0, min_y = 0;
};

// Breadth-first flood fill from every unvisited set pixel, in row-major seed order.
inline std::vector<Blob> components(const BinaryMask& m) {
    const int w = m.width(), h = m.height();
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<Blob> out;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!m.get(x, y) || seen[static_cast<std::size_t>(y) * w + x]) continue;
            Blob b;
            b.min_x = x;
            b.min_y = y;
            std::queue<std::pair<int, int>> q;
            q.push({x, y});
            seen[static_cast<std::size_t>(y) * w + x] = 1;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                b.pixels.push_back({cx, cy});
                b.min_x = std::min(b.min_x, cx);
                b.min_y = std::min(b.min_y, cy);
                const int nx[4] = {cx + 1, cx - 1, cx, cx};
                const int ny[4] = {cy, cy, cy + 1, cy - 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
                    auto& s = seen[static_cast<std::size_t>(ny[k]) * w + nx[k]];
                    if (s || !m.get(nx[k], ny[k])) continue;
                    s = 1;
                    q.push({nx[k], ny[k]});
                }
            }
            out.push_back(std::move(b));
        }
    }
    return out;
}

// Most pixels; ties go to the bounding-box corner first in row-major order.
inline std::optional<Blob> largest(const BinaryMask& m) {
    auto all = components(m);
    if (all.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < all.size(); ++i) {
        const auto& a = all[i];
        const auto& b = all[best];
        if (a.pixels.size() > b.pixels.size() ||
            (a.pixels.size() == b.pixels.size() && std::pair(a.min_y, a.min_x) < std::pair(b.min_y, b.min_x))) {
            best = i;
        }
    }
    return all[best];
}

inline std::optional<Point2> centroid(const BinaryMask& m) {
    auto b = largest(m);
    if (!b) return std::nullopt;
    long long sx = 0, sy = 0;
    for (auto [x, y] : b->pixels) {
        sx += x;
        sy += y;
    }
    const double n = static_cast<double>(b->pixels.size());
    return Point2{static_cast<double>(sx) / n, static_cast<double>(sy) / n};
}

// Pixels of the largest component that have a 4-neighbor in the outside region.
// Outside = non-component pixels 4-connected to a one-pixel frame around the mask.
inline std::set<std::pair<int, int>> outer_boundary(const BinaryMask& m) {
    std::set<std::pair<int, int>> out;
    auto b = largest(m);
    if (!b) return out;
    const int w = m.width() + 2, h = m.height() + 2;
    std::vector<char> comp(static_cast<std::size_t>(w) * h, 0), outside(comp.size(), 0);
    for (auto [x, y] : b->pixels) comp[static_cast<std::size_t>(y + 1) * w + (x + 1)] = 1;
    std::queue<std::pair<int, int>> q;
    q.push({0, 0});
    outside[0] = 1;
    while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        const int nx[4] = {x + 1, x - 1, x, x};
        const int ny[4] = {y, y, y + 1, y - 1};
        for (int k = 0; k < 4; ++k) {
            if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
            const auto i = static_cast<std::size_t>(ny[k]) * w + nx[k];
            if (outside[i] || comp[i]) continue;
            outside[i] = 1;
            q.push({nx[k], ny[k]});
        }
    }
    for (auto [x, y] : b->pixels) {
        const int px = x + 1, py = y + 1;
        const bool touches = outside[static_cast<std::size_t>(py) * w + px + 1] ||
                             outside[static_cast<std::size_t>(py) * w + px - 1] ||
                             outside[static_cast<std::size_t>(py + 1) * w + px] ||
                             outside[static_cast<std::size_t>(py - 1) * w + px];
        if (touches) out.insert({x, y});
    }
    return out;
}

// Random blobby mask: a few filled ellipses and rectangles plus salt noise.
inline BinaryMask random_mask(std::mt19937_64& rng, int max_side = 64) {
    std::uniform_int_distribution<int> side(1, max_side);
    const int w = side(rng), h = side(rng);
    BinaryMask m(w, h);
    std::uniform_int_distribution<int> shapes(0, 6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = shapes(rng);
    for (int s = 0; s < n; ++s) {
        const double cx = u(rng) * w, cy = u(rng) * h;
        const double rx = 1 + u(rng) * w / 3.0, ry = 1 + u(rng) * h / 3.0;
        const bool ellipse = u(rng) < 0.6;
        const bool erase = u(rng) < 0.15;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                const bool in = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
                if (in) m.set(x, y, !erase);
            }
        }
    }
    const double salt = u(rng) * 0.2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (u(rng) < salt) m.set(x, y, !m.get(x, y));
        }
    }
    return m;
}

// Unclamped-then-rounded source-over for one channel.
inline std::uint8_t over(std::uint8_t dst, std::uint8_t src, double alpha) {
    const double v = alpha * src + (1.0 - alpha) * dst;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

inline double seg_distance(Point2 p, Point2 a, Point2 b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

// Distance from p to the closed ring through `ring`.
inline double ring_distance(Point2 p, const std::vector<Point2>& ring) {
    if (ring.size() == 1) return std::hypot(p.x - ring[0].x, p.y - ring[0].y);
    double best = INFINITY;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        best = std::min(best, seg_distance(p, ring[i], ring[(i + 1) % ring.size()]));
    }
    return best;
}

}  // namespace oracle
