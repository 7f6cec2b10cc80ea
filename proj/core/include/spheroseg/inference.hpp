#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spheroseg/geometry.hpp"
#include "spheroseg/image.hpp"

namespace spheroseg {

struct ModelConfig {
    std::filesystem::path model_path;
    int input_width = 650;
    int input_height = 515;
    double resize_factor = 0.5;
    int channel_count = 3;  // grayscale replicated when 3
    std::array<double, 3> norm_mean = {0.485, 0.456, 0.406};
    std::array<double, 3> norm_std = {0.229, 0.224, 0.225};
    int foreground_channel_index = 1;
    double threshold = 0.5;
    // Auto: softmax applied when outputs look like logits.
    enum class OutputKind { Auto, Logits, Probabilities } output_kind = OutputKind::Auto;
    bool deterministic = false;  // single-threaded backend execution

    void validate() const;
};

/// Reads ModelConfig fields from a JSON sidecar (model.json next to the
/// model file). Absent fields keep their defaults.
ModelConfig load_model_config(const std::filesystem::path& model_path,
                              const std::filesystem::path& sidecar = {});

/// Per-pixel spheroid probability in [0,1] at model resolution.
struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<float> probs;

    float at(int x, int y) const { return probs[std::size_t(y) * width + x]; }
};

struct SegmentResult {
    Mask mask;                         // at original image resolution
    std::vector<PolygonChain> chains;  // scaled back to original resolution
    std::optional<SpheroidMeasure> measure;  // largest component, empty detection -> nullopt
};

/// One inference session per worker; not shared across threads.
class ModelSession {
public:
    ~ModelSession();
    ModelSession(ModelSession&&) noexcept;
    ModelSession& operator=(ModelSession&&) noexcept;

    const ModelConfig& config() const;

    /// Loads and validates the model with a probe forward pass, so a
    /// signature mismatch is reported before the first real inference.
    static ModelSession load(const ModelConfig& config);

    /// Full preprocessing + forward pass on an 8-bit grayscale image:
    /// resize to input dims, scale to [0,1], normalize, replicate
    /// channels, softmax when the output carries logits, take the
    /// foreground channel.
    ProbabilityMap predict_heatmap(const GrayImage& img);

    /// Heatmap -> threshold (>= rule) -> components -> border chains ->
    /// rescale chains to original resolution -> rasterize -> measure.
    SegmentResult segment(const GrayImage& img);

private:
    ModelSession();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Post-processing shared with synthetic-heatmap tests: threshold at
/// model resolution, trace component borders, scale chains by
/// 1/resize_factor, rasterize and measure at original dims.
SegmentResult postprocess_heatmap(const ProbabilityMap& heatmap, double threshold,
                                  double chain_scale, int out_width, int out_height,
                                  double scale_um_per_px);

/// Pixels with probability >= threshold.
Mask threshold_map(const ProbabilityMap& heatmap, double threshold);

}  // namespace spheroseg
