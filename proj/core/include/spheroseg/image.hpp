#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "spheroseg/chain.hpp"
#include "spheroseg/errors.hpp"

namespace spheroseg {

/// 2-D grayscale raster with bit depth and physical scale.
/// Pixels are stored row-major as uint16 regardless of bit depth;
/// every intensity stays below 2^bit_depth.
struct GrayImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 16
    std::vector<std::uint16_t> pixels;
    double scale_um_per_px = 2.04;

    std::uint16_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
    std::uint16_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
};

/// Binary pixel set on an image grid. Serialized form is 8-bit PNG
/// with background 0 and foreground 255.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    static Mask zeros(int w, int h) { return Mask{w, h, std::vector<std::uint8_t>(std::size_t(w) * h, 0)}; }

    bool at(int x, int y) const { return bits[std::size_t(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[std::size_t(y) * width + x] = v ? 1 : 0; }
    std::size_t area() const;
    bool empty() const { return area() == 0; }

    bool operator==(const Mask&) const = default;
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // interleaved RGB, row-major
};

enum class Transform { VFlip, HFlip, Rot180 };

/// Loads a single-channel 8- or 16-bit PNG/TIFF. Multi-channel input
/// is rejected with UnsupportedFormat.
GrayImage load_image(const std::filesystem::path& path, double scale_um_per_px = 2.04);

void save_image(const GrayImage& img, const std::filesystem::path& path);

/// Min/max rescale to 8 bit: round(255*(v-min)/(max-min)), half up.
/// A constant image maps to all zeros.
GrayImage to_8bit(const GrayImage& img);

/// Bilinear resize by a factor in (0,1]. Output dims = floor(factor*dims),
/// scale_um_per_px divided by factor. Factor 1 returns the raster unchanged.
GrayImage resize(const GrayImage& img, double factor);

/// Nearest-neighbor mask resize (masks must stay binary).
Mask resize_nearest(const Mask& mask, double factor);

void save_mask(const Mask& mask, const std::filesystem::path& path);

/// Loads an 8-bit single-channel PNG; any nonzero pixel is foreground.
Mask load_mask(const std::filesystem::path& path);

/// Draws 1-px polyline strokes over the grayscale base (replicated to RGB).
/// Later contours are drawn on top. The base must be 8-bit.
RgbImage render_overlay(const GrayImage& img,
                        const std::vector<std::pair<PolygonChain, Rgb>>& contours);

void save_rgb(const RgbImage& img, const std::filesystem::path& path);

/// Applies the same flip/rotation to image and mask. Output dims equal
/// input dims.
std::pair<GrayImage, Mask> augment(const GrayImage& img, const Mask& mask, Transform t);

const char* transform_name(Transform t);

/// Seeded uniform pick of one transform per input pair; the same seed
/// reproduces the same choices.
std::vector<Transform> pick_transforms(std::uint64_t seed, std::size_t n);

}  // namespace spheroseg
