#include "scribble/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace scribble {

void TrackerState::record_fix(Point2 p) {
    last_position = p;
    lost_for = 0;
    history.push_back(p);
    if (history.size() > kHistoryLimit) {
        history.pop_front();
    }
}

ColorWindow sample_color_window(const RgbImage& frame, Point2 p) {
    const int x = static_cast<int>(std::floor(p.x));
    const int y = static_cast<int>(std::floor(p.y));
    if (!is_finite(p) || !frame.contains(x, y)) {
        throw Error("sample-outside-frame");
    }
    const auto* px = frame.pixel(x, y);
    auto lo = [](int v) { return static_cast<std::uint8_t>(std::max(0, v - kColorTolerance)); };
    auto hi = [](int v) { return static_cast<std::uint8_t>(std::min(255, v + kColorTolerance)); };
    return {lo(px[0]), hi(px[0]), lo(px[1]), hi(px[1]), lo(px[2]), hi(px[2])};
}

BinaryMask segment_by_window(const RgbImage& frame, const ColorWindow& w) {
    BinaryMask mask(frame.width(), frame.height());
    const auto& src = frame.bytes();
    auto& dst = mask.bits();
    for (std::size_t i = 0, j = 0; j < dst.size(); ++j, i += 3) {
        dst[j] = w.contains(src[i], src[i + 1], src[i + 2]) ? 1 : 0;
    }
    return mask;
}

const Component* ComponentLabels::largest() const {
    const Component* best = nullptr;
    for (const auto& c : components) {
        if (!best) {
            best = &c;
            continue;
        }
        // Larger count wins; otherwise the smaller bounding-box corner. Labels
        // increase in scan order, so keeping `best` on a full tie picks the lower one.
        if (c.pixel_count > best->pixel_count ||
            (c.pixel_count == best->pixel_count &&
             std::tie(c.min_y, c.min_x) < std::tie(best->min_y, best->min_x))) {
            best = &c;
        }
    }
    return best;
}

ComponentLabels label_components(const BinaryMask& mask) {
    ComponentLabels out;
    out.width = mask.width();
    out.height = mask.height();
    out.labels.assign(mask.bits().size(), 0);

    const int w = mask.width();
    const int h = mask.height();
    const auto& bits = mask.bits();
    std::vector<std::size_t> stack;

    for (std::size_t start = 0; start < bits.size(); ++start) {
        if (!bits[start] || out.labels[start] != 0) continue;

        const std::size_t label = out.components.size() + 1;
        Component comp;
        comp.label = label;
        comp.min_x = comp.min_y = std::numeric_limits<int>::max();
        comp.max_x = comp.max_y = std::numeric_limits<int>::min();

        out.labels[start] = label;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(idx % w);
            const int y = static_cast<int>(idx / w);
            ++comp.pixel_count;
            comp.sum_x += x;
            comp.sum_y += y;
            comp.min_x = std::min(comp.min_x, x);
            comp.max_x = std::max(comp.max_x, x);
            comp.min_y = std::min(comp.min_y, y);
            comp.max_y = std::max(comp.max_y, y);

            auto visit = [&](std::size_t n) {
                if (bits[n] && out.labels[n] == 0) {
                    out.labels[n] = label;
                    stack.push_back(n);
                }
            };
            if (x > 0) visit(idx - 1);
            if (x + 1 < w) visit(idx + 1);
            if (y > 0) visit(idx - w);
            if (y + 1 < h) visit(idx + w);
        }
        out.components.push_back(comp);
    }
    return out;
}

BinaryMask largest_component_mask(const BinaryMask& mask) {
    const ComponentLabels labels = label_components(mask);
    BinaryMask out(mask.width(), mask.height());
    const Component* best = labels.largest();
    if (!best) return out;
    auto& dst = out.bits();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = labels.labels[i] == best->label ? 1 : 0;
    }
    return out;
}

std::optional<Point2> largest_component_centroid(const BinaryMask& mask) {
    const ComponentLabels labels = label_components(mask);
    if (const Component* best = labels.largest()) {
        return best->centroid();
    }
    return std::nullopt;
}

TrackerState track_mask(const BinaryMask& mask, const TrackerState& state) {
    TrackerState next = state;
    if (auto c = largest_component_centroid(mask)) {
        next.record_fix(*c);
    } else {
        next.record_miss();
    }
    return next;
}

TrackerState track_color(const RgbImage& frame, const TrackerState& state, const ColorWindow& w) {
    return track_mask(segment_by_window(frame, w), state);
}

TrackerState track_keypoint(const PoseFrame& pose, const TrackerState& state, int index) {
    TrackerState next = state;
    const Keypoint& kp = pose.keypoints.at(static_cast<std::size_t>(index));
    if (kp.visible) {
        next.record_fix(kp.position);
    } else {
        next.record_miss();
    }
    return next;
}

int nearest_keypoint(const PoseFrame& pose, Point2 click) {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPoseKeypointCount; ++i) {
        const Keypoint& kp = pose.keypoints[static_cast<std::size_t>(i)];
        if (!kp.visible) continue;
        const double dx = kp.position.x - click.x;
        const double dy = kp.position.y - click.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    if (best < 0) {
        throw Error("no-pose");
    }
    return best;
}

double pair_distance(const TrackerState& a, const TrackerState& b) {
    return distance(a.last_position, b.last_position);
}

}  // namespace scribble
