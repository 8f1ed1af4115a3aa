#pragma once

#include <cstdint>

#include "scribble/model.hpp"
#include "scribble/raster.hpp"

namespace scribble {

/// Closed ring; the closing segment from back() to front() is implicit.
struct ContourPolyline {
    Polyline points;
    std::int64_t source_frame = 0;

    friend bool operator==(const ContourPolyline&, const ContourPolyline&) = default;
};

/// Outer boundary pixels of the mask's largest 4-connected component, traced
/// with Moore-neighbor following. Holes are ignored. Starts at the topmost, then
/// leftmost pixel and runs counter-clockwise on screen (down the left side first).
/// Throws Error("empty-mask") when no pixel is set.
ContourPolyline extract_outer_contour(const BinaryMask& mask, std::int64_t source_frame = 0);

/// Ramer-Douglas-Peucker on a closed ring. The ring is split at its first vertex
/// and the vertex farthest from it; a vertex survives only when it lies more than
/// `epsilon` from the chord of its span. With epsilon 0 this drops collinear and
/// repeated vertices.
ContourPolyline simplify_polyline(const ContourPolyline& poly, double epsilon);

struct AnimatedContour {
    double window_fraction = 0.25;
    double cycles_per_second = 0.5;
};

/// Open sub-polyline of arc length window_fraction * perimeter starting at
/// offset frac(t * cycles_per_second) * perimeter, wrapping over the closure.
/// A full window returns the whole ring, closed by repeating its first point.
Polyline contour_window(const ContourPolyline& poly, double t, const AnimatedContour& style);

/// Pixels of one component painted with a single color.
struct RasterFill {
    BinaryMask mask;
    Rgba color;

    friend bool operator==(const RasterFill&, const RasterFill&) = default;
};

/// Fill of the largest component. Throws Error("empty-mask") when no pixel is set.
RasterFill fill_region(const BinaryMask& mask, Rgba color);

}  // namespace scribble
