#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "scribble/model.hpp"
#include "scribble/raster.hpp"

namespace scribble {

inline constexpr int kColorTolerance = 10;
inline constexpr int kDefaultLostWarning = 30;

struct Keypoint {
    Point2 position;
    bool visible = false;

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct PoseFrame {
    std::array<Keypoint, kPoseKeypointCount> keypoints{};

    friend bool operator==(const PoseFrame&, const PoseFrame&) = default;
};

struct TrackerState {
    std::string tracker_id;
    Point2 last_position;
    int lost_for = 0;
    std::deque<Point2> history;  // most recent fix last

    static constexpr std::size_t kHistoryLimit = 64;

    void record_fix(Point2 p);
    void record_miss() { ++lost_for; }

    friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

/// Window of +-10 around the pixel at `p`, clamped to [0, 255].
/// Throws Error("sample-outside-frame") when `p` is outside the frame.
ColorWindow sample_color_window(const RgbImage& frame, Point2 p);

BinaryMask segment_by_window(const RgbImage& frame, const ColorWindow& w);

/// One 4-connected component of a mask.
struct Component {
    std::size_t pixel_count = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    long long sum_x = 0, sum_y = 0;
    std::size_t label = 0;  // 1-based, in row-major order of first pixel

    Point2 centroid() const {
        return {static_cast<double>(sum_x) / static_cast<double>(pixel_count),
                static_cast<double>(sum_y) / static_cast<double>(pixel_count)};
    }
};

/// Labels of the 4-connected components, row-major; 0 marks unset pixels.
struct ComponentLabels {
    int width = 0;
    int height = 0;
    std::vector<std::size_t> labels;
    std::vector<Component> components;  // components[label - 1]

    /// Largest by pixel count; ties go to the smaller (min_y, min_x) bounding-box
    /// corner, then to the lower label.
    const Component* largest() const;
};

ComponentLabels label_components(const BinaryMask& mask);

/// Mask holding only the pixels of the largest component (empty mask if none).
BinaryMask largest_component_mask(const BinaryMask& mask);

std::optional<Point2> largest_component_centroid(const BinaryMask& mask);

/// Hold-last update: a found centroid replaces the position and resets
/// `lost_for`; an empty segmentation only increments `lost_for`.
TrackerState track_color(const RgbImage& frame, const TrackerState& state, const ColorWindow& w);

/// Same as track_color but over an already segmented mask.
TrackerState track_mask(const BinaryMask& mask, const TrackerState& state);

/// Keypoint tracker update: visible keypoint is a fix, invisible is a miss.
TrackerState track_keypoint(const PoseFrame& pose, const TrackerState& state, int index);

/// Index of the visible keypoint closest to `click`; ties go to the lower index.
/// Throws Error("no-pose") when no keypoint is visible.
int nearest_keypoint(const PoseFrame& pose, Point2 click);

double pair_distance(const TrackerState& a, const TrackerState& b);

}  // namespace scribble
