#pragma once

#include <vector>

#include "spheroseg/chain.hpp"
#include "spheroseg/image.hpp"

namespace spheroseg {

/// Shape measurements of one spheroid component.
struct SpheroidMeasure {
    double area_px = 0.0;
    double perimeter_px = 0.0;
    double diameter_um = 0.0;   // 2*sqrt(area/pi)*scale
    double volume_um3 = 0.0;    // pi*d^3/6
    double circularity = 0.0;   // 4*pi*area/perimeter^2
};

/// Partition of the foreground under 8-connectivity, sorted by
/// descending area. Empty mask gives an empty list.
std::vector<Mask> connected_components(const Mask& mask);

/// Outer border of one 8-connected component as an ordered pixel chain,
/// clockwise in image coordinates (y down). Holes are ignored: the chain
/// equals that of the hole-filled component. Every vertex has a 4-neighbor
/// background pixel or lies on the image border.
PolygonChain trace_border(const Mask& component);

/// Sum of Euclidean steps between consecutive vertices including the
/// closing edge (axis step 1, diagonal sqrt(2)). Single vertex -> 1.0.
double perimeter(const PolygonChain& chain);

/// Measures the largest component of a nonempty mask.
SpheroidMeasure measure(const Mask& mask, double scale_um_per_px);

/// Fills the closed polygon into a mask. Consecutive vertices are
/// connected with 8-connected line segments before filling, so chains
/// rescaled by scale_chain rasterize without leaks.
Mask rasterize(const PolygonChain& chain, int width, int height);

/// Multiplies each vertex by factor (rounded half up) and collapses
/// consecutive duplicates.
PolygonChain scale_chain(const PolygonChain& chain, double factor);

}  // namespace spheroseg
