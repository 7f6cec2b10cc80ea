#include "spheroseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace spheroseg {

namespace {

int round_half_up(double v) {
    return int(std::floor(v + 0.5));
}

cv::Mat read_raw(const std::filesystem::path& path) {
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (m.empty()) {
        throw Error(ErrorCode::IoFailure, "cannot read image: " + path.string());
    }
    return m;
}

}  // namespace

std::size_t Mask::area() const {
    return std::size_t(std::accumulate(bits.begin(), bits.end(), std::uint64_t(0)));
}

GrayImage load_image(const std::filesystem::path& path, double scale_um_per_px) {
    cv::Mat m = read_raw(path);
    if (m.channels() != 1) {
        throw Error(ErrorCode::UnsupportedFormat,
                    "expected single-channel image, got " + std::to_string(m.channels()) +
                        " channels: " + path.string());
    }
    if (m.depth() != CV_8U && m.depth() != CV_16U) {
        throw Error(ErrorCode::UnsupportedFormat, "expected 8- or 16-bit image: " + path.string());
    }

    GrayImage img;
    img.width = m.cols;
    img.height = m.rows;
    img.bit_depth = (m.depth() == CV_8U) ? 8 : 16;
    img.scale_um_per_px = scale_um_per_px;
    img.pixels.resize(std::size_t(m.cols) * m.rows);
    for (int y = 0; y < m.rows; ++y) {
        for (int x = 0; x < m.cols; ++x) {
            img.at(x, y) = (img.bit_depth == 8) ? m.at<std::uint8_t>(y, x) : m.at<std::uint16_t>(y, x);
        }
    }
    return img;
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
    cv::Mat m(img.height, img.width, img.bit_depth == 8 ? CV_8U : CV_16U);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (img.bit_depth == 8) {
                m.at<std::uint8_t>(y, x) = std::uint8_t(img.at(x, y));
            } else {
                m.at<std::uint16_t>(y, x) = img.at(x, y);
            }
        }
    }
    if (!cv::imwrite(path.string(), m)) {
        throw Error(ErrorCode::IoFailure, "cannot write image: " + path.string());
    }
}

GrayImage to_8bit(const GrayImage& img) {
    GrayImage out = img;
    out.bit_depth = 8;
    if (img.pixels.empty()) return out;

    auto [mn_it, mx_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn) {
        std::fill(out.pixels.begin(), out.pixels.end(), std::uint16_t(0));
        return out;
    }
    const double span = mx - mn;
    for (auto& v : out.pixels) {
        v = std::uint16_t(round_half_up(255.0 * (v - mn) / span));
    }
    return out;
}

GrayImage resize(const GrayImage& img, double factor) {
    if (factor <= 0.0 || factor > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "resize factor must be in (0,1]");
    }
    if (factor == 1.0) return img;

    const int ow = int(std::floor(factor * img.width));
    const int oh = int(std::floor(factor * img.height));
    if (ow < 1 || oh < 1) {
        throw Error(ErrorCode::InvalidArgument, "resize target is degenerate");
    }

    GrayImage out;
    out.width = ow;
    out.height = oh;
    out.bit_depth = img.bit_depth;
    out.scale_um_per_px = img.scale_um_per_px / factor;
    out.pixels.resize(std::size_t(ow) * oh);

    const double sx = double(img.width) / ow;
    const double sy = double(img.height) / oh;
    for (int y = 0; y < oh; ++y) {
        const double fy = (y + 0.5) * sy - 0.5;
        const int y0 = std::clamp(int(std::floor(fy)), 0, img.height - 1);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = std::clamp(fy - y0, 0.0, 1.0);
        for (int x = 0; x < ow; ++x) {
            const double fx = (x + 0.5) * sx - 0.5;
            const int x0 = std::clamp(int(std::floor(fx)), 0, img.width - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = std::clamp(fx - x0, 0.0, 1.0);
            const double top = img.at(x0, y0) * (1 - wx) + img.at(x1, y0) * wx;
            const double bot = img.at(x0, y1) * (1 - wx) + img.at(x1, y1) * wx;
            out.at(x, y) = std::uint16_t(round_half_up(top * (1 - wy) + bot * wy));
        }
    }
    return out;
}

Mask resize_nearest(const Mask& mask, double factor) {
    if (factor <= 0.0) throw Error(ErrorCode::InvalidArgument, "resize factor must be positive");
    const int ow = std::max(1, int(std::floor(factor * mask.width)));
    const int oh = std::max(1, int(std::floor(factor * mask.height)));
    Mask out = Mask::zeros(ow, oh);
    for (int y = 0; y < oh; ++y) {
        const int sy = std::clamp(int((y + 0.5) * mask.height / oh), 0, mask.height - 1);
        for (int x = 0; x < ow; ++x) {
            const int sx = std::clamp(int((x + 0.5) * mask.width / ow), 0, mask.width - 1);
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
    cv::Mat m(mask.height, mask.width, CV_8U);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            m.at<std::uint8_t>(y, x) = mask.at(x, y) ? 255 : 0;
        }
    }
    if (!cv::imwrite(path.string(), m)) {
        throw Error(ErrorCode::IoFailure, "cannot write mask: " + path.string());
    }
}

Mask load_mask(const std::filesystem::path& path) {
    cv::Mat m = read_raw(path);
    if (m.channels() != 1 || m.depth() != CV_8U) {
        throw Error(ErrorCode::UnsupportedFormat, "mask must be 8-bit single-channel: " + path.string());
    }
    Mask mask = Mask::zeros(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        for (int x = 0; x < m.cols; ++x) {
            mask.set(x, y, m.at<std::uint8_t>(y, x) != 0);
        }
    }
    return mask;
}

RgbImage render_overlay(const GrayImage& img,
                        const std::vector<std::pair<PolygonChain, Rgb>>& contours) {
    if (img.bit_depth != 8) {
        throw Error(ErrorCode::InvalidArgument, "overlay base must be 8-bit (apply to_8bit first)");
    }
    RgbImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(std::size_t(img.width) * img.height * 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const auto v = std::uint8_t(img.pixels[i]);
        out.data[i * 3] = out.data[i * 3 + 1] = out.data[i * 3 + 2] = v;
    }

    auto put = [&](int x, int y, Rgb c) {
        const std::size_t i = (std::size_t(y) * out.width + x) * 3;
        out.data[i] = c.r;
        out.data[i + 1] = c.g;
        out.data[i + 2] = c.b;
    };
    for (const auto& [chain, color] : contours) {
        for (const auto& v : chain.vertices) {
            if (v.x < 0 || v.x >= img.width || v.y < 0 || v.y >= img.height) {
                throw Error(ErrorCode::InvalidArgument, "contour vertex out of bounds");
            }
        }
        if (chain.empty()) continue;
        // 1-px polyline: Bresenham between consecutive vertices, closed.
        for (std::size_t i = 0; i < chain.size(); ++i) {
            PixelCoord a = chain.vertices[i];
            PixelCoord b = chain.vertices[(i + 1) % chain.size()];
            int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
            int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
            int err = dx + dy;
            int x = a.x, y = a.y;
            while (true) {
                put(x, y, color);
                if (x == b.x && y == b.y) break;
                const int e2 = 2 * err;
                if (e2 >= dy) { err += dy; x += sx; }
                if (e2 <= dx) { err += dx; y += sy; }
            }
        }
    }
    return out;
}

void save_rgb(const RgbImage& img, const std::filesystem::path& path) {
    cv::Mat m(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = (std::size_t(y) * img.width + x) * 3;
            // OpenCV writes BGR
            m.at<cv::Vec3b>(y, x) = cv::Vec3b(img.data[i + 2], img.data[i + 1], img.data[i]);
        }
    }
    if (!cv::imwrite(path.string(), m)) {
        throw Error(ErrorCode::IoFailure, "cannot write overlay: " + path.string());
    }
}

std::pair<GrayImage, Mask> augment(const GrayImage& img, const Mask& mask, Transform t) {
    if (img.width != mask.width || img.height != mask.height) {
        throw Error(ErrorCode::DimensionMismatch, "image and mask dims differ");
    }
    GrayImage oi = img;
    Mask om = mask;
    const int w = img.width, h = img.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int sx = x, sy = y;
            switch (t) {
                case Transform::VFlip: sy = h - 1 - y; break;
                case Transform::HFlip: sx = w - 1 - x; break;
                case Transform::Rot180: sx = w - 1 - x; sy = h - 1 - y; break;
            }
            oi.at(x, y) = img.at(sx, sy);
            om.set(x, y, mask.at(sx, sy));
        }
    }
    return {std::move(oi), std::move(om)};
}

std::vector<Transform> pick_transforms(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 2);
    std::vector<Transform> out(n);
    for (auto& t : out) t = Transform(pick(rng));
    return out;
}

const char* transform_name(Transform t) {
    switch (t) {
        case Transform::VFlip: return "vflip";
        case Transform::HFlip: return "hflip";
        case Transform::Rot180: return "rot180";
    }
    return "?";
}

}  // namespace spheroseg
