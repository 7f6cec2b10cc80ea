#include "spheroseg/otsu.hpp"

#include <algorithm>
#include <numeric>

#include "spheroseg/geometry.hpp"

namespace spheroseg {

Histogram histogram(const GrayImage& img) {
    if (img.bit_depth != 8) {
        throw Error(ErrorCode::InvalidArgument, "histogram expects an 8-bit image");
    }
    Histogram h{};
    for (auto v : img.pixels) ++h[v];
    return h;
}

int otsu_threshold(const Histogram& hist) {
    const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t(0));
    if (total == 0) {
        throw Error(ErrorCode::EmptyInput, "otsu_threshold: empty histogram");
    }

    double global_sum = 0.0;
    for (int v = 0; v < 256; ++v) global_sum += double(v) * hist[v];

    // between-class variance: w0*w1*(mu0-mu1)^2, classes <= t and > t
    int best = 0;
    double best_var = -1.0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < 256; ++t) {
        w0 += double(hist[t]);
        sum0 += double(t) * hist[t];
        const double w1 = double(total) - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (global_sum - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {  // strict: ties resolve to the lowest level
            best_var = var;
            best = t;
        }
    }
    if (best_var < 0.0) {
        // single populated bin: return that level, split is degenerate
        for (int t = 0; t < 256; ++t) {
            if (hist[t] > 0) return t;
        }
    }
    return best;
}

GrayImage erode(const GrayImage& img, int iterations) {
    if (iterations < 0 || iterations > 32) {
        throw Error(ErrorCode::InvalidArgument, "erosion iterations must be in [0,32]");
    }
    GrayImage cur = img;
    GrayImage next = img;
    for (int it = 0; it < iterations; ++it) {
        for (int y = 0; y < cur.height; ++y) {
            const int yu = std::max(y - 1, 0);
            const int yd = std::min(y + 1, cur.height - 1);
            for (int x = 0; x < cur.width; ++x) {
                const int xl = std::max(x - 1, 0);
                const int xr = std::min(x + 1, cur.width - 1);
                // 3x3 cross, edge replication
                std::uint16_t m = cur.at(x, y);
                m = std::min(m, cur.at(xl, y));
                m = std::min(m, cur.at(xr, y));
                m = std::min(m, cur.at(x, yu));
                m = std::min(m, cur.at(x, yd));
                next.at(x, y) = m;
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

Mask otsu_segment(const GrayImage& img, const OtsuParams& params) {
    if (img.bit_depth != 8) {
        throw Error(ErrorCode::InvalidArgument, "otsu_segment expects an 8-bit image");
    }
    const GrayImage work = erode(img, params.erosion_iterations);
    const Histogram h = histogram(work);

    std::size_t populated = 0;
    for (auto c : h) populated += (c > 0);
    if (populated <= 1) {
        return Mask::zeros(img.width, img.height);  // degenerate histogram
    }

    const int level = otsu_threshold(h);
    Mask mask = Mask::zeros(work.width, work.height);
    for (int y = 0; y < work.height; ++y) {
        for (int x = 0; x < work.width; ++x) {
            const auto v = work.at(x, y);
            const bool fg = params.polarity == Polarity::DarkForeground ? v <= level : v > level;
            mask.set(x, y, fg);
        }
    }
    auto comps = connected_components(mask);
    return comps.empty() ? Mask::zeros(work.width, work.height) : std::move(comps.front());
}

}  // namespace spheroseg
