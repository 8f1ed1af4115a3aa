#pragma once

// Deterministic synthetic inputs: a moving color blob, a scripted skeleton and
// its silhouette mask. Used by the benchmark, the demo generator and tests.

#include <cstdint>
#include <filesystem>

#include "scribble/model.hpp"
#include "scribble/raster.hpp"
#include "scribble/scene_io.hpp"
#include "scribble/tracking.hpp"

namespace scribble::synthetic {

inline constexpr Rgba kBackground{52, 60, 72, 255};
inline constexpr Rgba kBallColor{220, 40, 40, 255};
inline constexpr Rgba kDistractorColor{40, 200, 60, 255};
inline constexpr int kBallRadius = 14;

inline constexpr int kHandKeypoint = 15;  // left wrist
inline constexpr int kFootKeypoint = 28;  // right ankle

/// Center of the tracked ball at frame `i`.
Point2 ball_center(FrameSize size, std::int64_t i);

/// Background, a distractor square and the ball.
RgbImage frame(FrameSize size, std::int64_t i);

/// 33-keypoint standing figure; the left wrist sweeps down toward the right
/// ankle and back every 60 frames.
PoseFrame pose(FrameSize size, std::int64_t i);

/// Silhouette: discs around keypoints joined by limb capsules.
BinaryMask body_mask(const PoseFrame& pose, FrameSize size);

/// One effect of each kind: umbrella bound to the hand, a flip-book splash
/// fired when hand and foot meet, rain from a cloud bound to the ball, a
/// trajectory trail behind the ball and an animated body contour.
Scene teaser_scene(FrameSize size = {640, 480}, std::uint64_t seed = 7);

/// Writes frame_%06d.png, pose.json, masks.bin and scene.json into `dir`.
void write_clip(const std::filesystem::path& dir, FrameSize size, std::int64_t count, const Scene& scene);

}  // namespace scribble::synthetic
