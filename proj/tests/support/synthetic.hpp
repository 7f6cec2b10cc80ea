#pragma once

// Synthetic masks, images and independent oracles shared by the unit and
// acceptance suites. Everything here is deliberately implemented apart
// from the library code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "spheroseg/image.hpp"

namespace testsupport {

using spheroseg::GrayImage;
using spheroseg::Mask;

inline Mask disk_mask(int width, int height, double cx, double cy, double r) {
    Mask m = Mask::zeros(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) m.set(x, y, true);
        }
    }
    return m;
}

inline Mask rect_mask(int width, int height, int x0, int y0, int w, int h) {
    Mask m = Mask::zeros(width, height);
    for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) m.set(x, y, true);
    }
    return m;
}

inline Mask random_mask(int width, int height, double density, std::mt19937& rng) {
    Mask m = Mask::zeros(width, height);
    std::bernoulli_distribution bit(density);
    for (auto& b : m.bits) b = bit(rng) ? 1 : 0;
    return m;
}

// ---------------------------------------------------------------- oracles

/// Independent BFS flood fill, 8-connected foreground labeling.
inline std::vector<int> flood_fill_labels(const Mask& m) {
    std::vector<int> label(m.bits.size(), -1);
    int next_label = 0;
    for (int sy = 0; sy < m.height; ++sy) {
        for (int sx = 0; sx < m.width; ++sx) {
            if (!m.at(sx, sy) || label[std::size_t(sy) * m.width + sx] >= 0) continue;
            std::queue<std::pair<int, int>> q;
            q.push({sx, sy});
            label[std::size_t(sy) * m.width + sx] = next_label;
            while (!q.empty()) {
                auto [x, y] = q.front();
                q.pop();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || nx >= m.width || ny < 0 || ny >= m.height) continue;
                        const std::size_t i = std::size_t(ny) * m.width + nx;
                        if (m.bits[i] && label[i] < 0) {
                            label[i] = next_label;
                            q.push({nx, ny});
                        }
                    }
                }
            }
            ++next_label;
        }
    }
    return label;
}

/// 4-exposure boundary oracle: foreground pixels with a 4-neighbor
/// background pixel or image-border exposure.
inline std::set<std::pair<int, int>> boundary_oracle(const Mask& m) {
    std::set<std::pair<int, int>> out;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            const bool exposed = x == 0 || x == m.width - 1 || y == 0 || y == m.height - 1 ||
                                 !m.at(x - 1, y) || !m.at(x + 1, y) || !m.at(x, y - 1) ||
                                 !m.at(x, y + 1);
            if (exposed) out.insert({x, y});
        }
    }
    return out;
}

/// True when the background is one 4-connected region touching the border
/// (i.e. the foreground has no holes).
inline bool hole_free(const Mask& m) {
    std::vector<std::uint8_t> outside(m.bits.size(), 0);
    std::queue<std::pair<int, int>> q;
    auto push = [&](int x, int y) {
        const std::size_t i = std::size_t(y) * m.width + x;
        if (!outside[i] && !m.bits[i]) {
            outside[i] = 1;
            q.push({x, y});
        }
    };
    for (int x = 0; x < m.width; ++x) { push(x, 0); push(x, m.height - 1); }
    for (int y = 0; y < m.height; ++y) { push(0, y); push(m.width - 1, y); }
    while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        if (x > 0) push(x - 1, y);
        if (x < m.width - 1) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y < m.height - 1) push(x, y + 1);
    }
    for (std::size_t i = 0; i < m.bits.size(); ++i) {
        if (!m.bits[i] && !outside[i]) return false;
    }
    return true;
}

/// Random hole-free 8-connected blob: union of a few random disks, largest
/// component kept, holes filled by construction check (regenerate on holes).
inline Mask random_blob(int width, int height, std::mt19937& rng) {
    std::uniform_int_distribution<int> px(4, width - 5), py(4, height - 5);
    std::uniform_real_distribution<double> pr(1.0, std::min(width, height) / 4.0);
    for (;;) {
        Mask m = Mask::zeros(width, height);
        std::uniform_int_distribution<int> nd(1, 4);
        const int disks = nd(rng);
        double cx0 = px(rng), cy0 = py(rng);
        for (int d = 0; d < disks; ++d) {
            const double r = pr(rng);
            // keep disks near each other so most draws are connected
            const double cx = std::clamp(cx0 + (px(rng) - width / 2.0) / 4.0, 1.0, width - 2.0);
            const double cy = std::clamp(cy0 + (py(rng) - height / 2.0) / 4.0, 1.0, height - 2.0);
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    const double dx = x - cx, dy = y - cy;
                    if (dx * dx + dy * dy <= r * r) m.set(x, y, true);
                }
            }
        }
        // keep the largest 8-connected piece
        const auto labels = flood_fill_labels(m);
        int max_label = -1;
        for (int l : labels) max_label = std::max(max_label, l);
        if (max_label < 0) continue;
        std::vector<std::size_t> counts(max_label + 1, 0);
        for (int l : labels) {
            if (l >= 0) ++counts[l];
        }
        const int keep = int(std::max_element(counts.begin(), counts.end()) - counts.begin());
        for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = labels[i] == keep ? 1 : 0;
        if (hole_free(m)) return m;
    }
}

inline GrayImage gray_image(int width, int height, std::uint16_t fill, int bit_depth = 8,
                            double scale = 2.04) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.bit_depth = bit_depth;
    img.scale_um_per_px = scale;
    img.pixels.assign(std::size_t(width) * height, fill);
    return img;
}

/// Adaptive Simpson quadrature.
template <typename F>
double adaptive_simpson(F f, double a, double b, double tol, int depth = 40) {
    auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f((lo + hi) / 2.0) + f(hi));
    };
    struct Rec {
        double a, b, whole;
        int depth;
    };
    const double whole = simpson(a, b);
    std::vector<Rec> stack{{a, b, whole, depth}};
    double total = 0.0;
    while (!stack.empty()) {
        auto [lo, hi, w, d] = stack.back();
        stack.pop_back();
        const double mid = (lo + hi) / 2.0;
        const double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - w) < 15.0 * tol) {
            total += left + right + (left + right - w) / 15.0;
        } else {
            stack.push_back({lo, mid, left, d - 1});
            stack.push_back({mid, hi, right, d - 1});
        }
    }
    return total;
}

/// Chi-square survival function by integrating the density from x.
inline double chi2_sf_quadrature(double x, int dof) {
    const double a = dof / 2.0;
    auto pdf = [a](double t) {
        return std::exp((a - 1.0) * std::log(t) - t / 2.0 - a * std::log(2.0) - std::lgamma(a));
    };
    const double upper = x + 400.0;  // exp(-200) tail is far below tolerance
    return adaptive_simpson(pdf, std::max(x, 1e-300), upper, 1e-13);
}

/// Standard normal survival function by quadrature.
inline double normal_sf_quadrature(double z) {
    auto pdf = [](double t) { return std::exp(-t * t / 2.0) / std::sqrt(2.0 * 3.14159265358979323846); };
    if (z >= 0.0) return adaptive_simpson(pdf, z, z + 40.0, 1e-13);
    return 1.0 - adaptive_simpson(pdf, -z, -z + 40.0, 1e-13);
}

}  // namespace testsupport
