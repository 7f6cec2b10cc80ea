#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spheroseg {

struct PixelCoord {
    int x = 0;
    int y = 0;

    bool operator==(const PixelCoord&) const = default;
};

/// Ordered border-pixel vertices of one connected component.
/// The chain is implicitly closed; consecutive vertices produced by
/// trace_border are 8-neighbors.
struct PolygonChain {
    std::vector<PixelCoord> vertices;

    bool empty() const { return vertices.empty(); }
    std::size_t size() const { return vertices.size(); }
};

/// JSON form: {"vertices": [[x,y],...], "closed": true}
std::string chain_to_json(const PolygonChain& chain);
PolygonChain chain_from_json(const std::string& json_text);

}  // namespace spheroseg
