#include "spheroseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

namespace spheroseg {

namespace {

constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};   // N, NE, E, SE, S, SW, W, NW
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

int round_half_up(double v) { return int(std::floor(v + 0.5)); }

/// Fills 4-connected background holes: everything not reachable from
/// the image border through background becomes foreground.
Mask fill_holes(const Mask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<std::uint8_t> outside(std::size_t(w) * h, 0);
    std::vector<PixelCoord> stack;
    auto push = [&](int x, int y) {
        const std::size_t i = std::size_t(y) * w + x;
        if (!outside[i] && !mask.bits[i]) {
            outside[i] = 1;
            stack.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) { push(x, 0); push(x, h - 1); }
    for (int y = 0; y < h; ++y) { push(0, y); push(w - 1, y); }
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        if (x > 0) push(x - 1, y);
        if (x < w - 1) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y < h - 1) push(x, y + 1);
    }
    Mask filled = Mask::zeros(w, h);
    for (std::size_t i = 0; i < filled.bits.size(); ++i) filled.bits[i] = outside[i] ? 0 : 1;
    return filled;
}

}  // namespace

std::vector<Mask> connected_components(const Mask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(std::size_t(w) * h, -1);
    std::vector<Mask> comps;
    std::vector<PixelCoord> stack;

    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t i0 = std::size_t(y0) * w + x0;
            if (!mask.bits[i0] || label[i0] >= 0) continue;
            const int id = int(comps.size());
            comps.push_back(Mask::zeros(w, h));
            Mask& comp = comps.back();
            label[i0] = id;
            stack.push_back({x0, y0});
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                comp.set(x, y, true);
                for (int d = 0; d < 8; ++d) {
                    const int nx = x + kDx[d], ny = y + kDy[d];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const std::size_t ni = std::size_t(ny) * w + nx;
                    if (mask.bits[ni] && label[ni] < 0) {
                        label[ni] = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    std::stable_sort(comps.begin(), comps.end(),
                     [](const Mask& a, const Mask& b) { return a.area() > b.area(); });
    return comps;
}

PolygonChain trace_border(const Mask& component) {
    if (component.empty()) {
        throw Error(ErrorCode::EmptyInput, "trace_border: empty component");
    }
    const Mask filled = fill_holes(component);
    const int w = filled.width, h = filled.height;
    auto fg = [&](int x, int y) {
        return x >= 0 && x < w && y >= 0 && y < h && filled.at(x, y);
    };

    // topmost-leftmost start pixel; the pixel above it is background
    PixelCoord start{-1, -1};
    for (int y = 0; y < h && start.x < 0; ++y) {
        for (int x = 0; x < w; ++x) {
            if (filled.at(x, y)) { start = {x, y}; break; }
        }
    }

    // first foreground neighbor clockwise after prev_dir
    auto next_dir = [&](PixelCoord p, int prev_dir) -> int {
        for (int i = 1; i <= 8; ++i) {
            const int d = (prev_dir + i) % 8;
            if (fg(p.x + kDx[d], p.y + kDy[d])) return d;
        }
        return -1;
    };

    PolygonChain chain;
    const int d0 = next_dir(start, 0);
    chain.vertices.push_back(start);
    if (d0 < 0) return chain;  // isolated pixel

    // Moore trace, stopping on re-entering the start edge (start, d0).
    PixelCoord cur = start;
    int out = d0;
    while (true) {
        const PixelCoord p{cur.x + kDx[out], cur.y + kDy[out]};
        const int nd = next_dir(p, (out + 4) % 8);
        if (p == start && nd == d0) break;
        chain.vertices.push_back(p);
        cur = p;
        out = nd;
    }
    return chain;
}

double perimeter(const PolygonChain& chain) {
    if (chain.empty()) return 0.0;
    if (chain.size() == 1) return 1.0;  // degenerate-detection convention
    double len = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& a = chain.vertices[i];
        const auto& b = chain.vertices[(i + 1) % chain.size()];
        len += std::hypot(double(b.x - a.x), double(b.y - a.y));
    }
    return len;
}

SpheroidMeasure measure(const Mask& mask, double scale_um_per_px) {
    if (mask.empty()) {
        throw Error(ErrorCode::EmptyInput, "measure: empty mask");
    }
    auto comps = connected_components(mask);
    const Mask& largest = comps.front();

    SpheroidMeasure m;
    m.area_px = double(largest.area());
    m.perimeter_px = perimeter(trace_border(largest));
    m.diameter_um = 2.0 * std::sqrt(m.area_px / std::numbers::pi) * scale_um_per_px;
    m.volume_um3 = std::numbers::pi * m.diameter_um * m.diameter_um * m.diameter_um / 6.0;
    m.circularity = 4.0 * std::numbers::pi * m.area_px / (m.perimeter_px * m.perimeter_px);
    return m;
}

Mask rasterize(const PolygonChain& chain, int width, int height) {
    if (chain.empty()) return Mask::zeros(width, height);
    for (const auto& v : chain.vertices) {
        if (v.x < 0 || v.x >= width || v.y < 0 || v.y >= height) {
            throw Error(ErrorCode::InvalidArgument, "rasterize: vertex out of bounds");
        }
    }

    Mask border = Mask::zeros(width, height);
    for (std::size_t i = 0; i < chain.size(); ++i) {
        PixelCoord a = chain.vertices[i];
        const PixelCoord b = chain.vertices[(i + 1) % chain.size()];
        // 8-connected Bresenham; diagonal steps still block a 4-connected
        // background flood, so the fill below cannot leak.
        int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
        const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
        int err = dx + dy;
        while (true) {
            border.set(a.x, a.y, true);
            if (a == b) break;
            const int e2 = 2 * err;
            if (e2 >= dy) { err += dy; a.x += sx; }
            if (e2 <= dx) { err += dx; a.y += sy; }
        }
    }
    return fill_holes(border);
}

PolygonChain scale_chain(const PolygonChain& chain, double factor) {
    if (factor <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "scale_chain: factor must be positive");
    }
    PolygonChain out;
    out.vertices.reserve(chain.size());
    for (const auto& v : chain.vertices) {
        const PixelCoord s{round_half_up(v.x * factor), round_half_up(v.y * factor)};
        if (out.vertices.empty() || !(out.vertices.back() == s)) {
            out.vertices.push_back(s);
        }
    }
    if (out.vertices.size() > 1 && out.vertices.front() == out.vertices.back()) {
        out.vertices.pop_back();
    }
    return out;
}

std::string chain_to_json(const PolygonChain& chain) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : chain.vertices) {
        j["vertices"].push_back({v.x, v.y});
    }
    j["closed"] = true;
    return j.dump();
}

PolygonChain chain_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    PolygonChain chain;
    for (const auto& v : j.at("vertices")) {
        chain.vertices.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
    }
    return chain;
}

}  // namespace spheroseg
