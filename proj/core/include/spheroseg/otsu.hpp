#pragma once

#include <array>
#include <cstdint>

#include "spheroseg/image.hpp"

namespace spheroseg {

enum class Polarity { DarkForeground, BrightForeground };

struct OtsuParams {
    int erosion_iterations = 0;  // bounded to 32
    Polarity polarity = Polarity::DarkForeground;
};

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram(const GrayImage& img);

/// Level maximizing between-class variance over splits t in [0,255]
/// (classes <= t and > t). Ties resolve to the lowest level.
int otsu_threshold(const Histogram& hist);

/// Grayscale morphological erosion with a 3x3 cross structuring element,
/// edge-replicated borders, applied `iterations` times.
GrayImage erode(const GrayImage& img, int iterations);

/// Classical baseline: optional erosion, Otsu split, polarity-selected
/// foreground, largest component kept. A degenerate (single-level)
/// histogram yields an empty mask.
Mask otsu_segment(const GrayImage& img, const OtsuParams& params);

}  // namespace spheroseg
