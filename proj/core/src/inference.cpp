#include "spheroseg/inference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>

#include "json.hpp"

namespace spheroseg {

void ModelConfig::validate() const {
    if (threshold <= 0.0 || threshold >= 1.0) {
        throw Error(ErrorCode::InvalidConfig, "threshold must be in (0,1)");
    }
    if (input_width <= 0 || input_height <= 0) {
        throw Error(ErrorCode::InvalidConfig, "input dims must be positive");
    }
    if (channel_count != 1 && channel_count != 3) {
        throw Error(ErrorCode::InvalidConfig, "channel_count must be 1 or 3");
    }
    if (resize_factor <= 0.0 || resize_factor > 1.0) {
        throw Error(ErrorCode::InvalidConfig, "resize_factor must be in (0,1]");
    }
    if (foreground_channel_index < 0) {
        throw Error(ErrorCode::InvalidConfig, "foreground_channel_index must be >= 0");
    }
}

ModelConfig load_model_config(const std::filesystem::path& model_path,
                              const std::filesystem::path& sidecar) {
    ModelConfig cfg;
    cfg.model_path = model_path;

    std::filesystem::path json_path = sidecar;
    if (json_path.empty()) {
        json_path = model_path;
        json_path.replace_extension(".json");
        if (!std::filesystem::exists(json_path)) {
            json_path = model_path.parent_path() / "model.json";
        }
    }
    if (!std::filesystem::exists(json_path)) return cfg;

    std::ifstream in(json_path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read sidecar: " + json_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, "bad sidecar JSON: " + std::string(e.what()));
    }

    if (j.contains("input_width")) cfg.input_width = j["input_width"].get<int>();
    if (j.contains("input_height")) cfg.input_height = j["input_height"].get<int>();
    if (j.contains("resize_factor")) cfg.resize_factor = j["resize_factor"].get<double>();
    if (j.contains("channel_count")) cfg.channel_count = j["channel_count"].get<int>();
    if (j.contains("foreground_channel_index"))
        cfg.foreground_channel_index = j["foreground_channel_index"].get<int>();
    if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
    if (j.contains("norm_mean")) {
        const auto v = j["norm_mean"].get<std::vector<double>>();
        for (std::size_t i = 0; i < std::min<std::size_t>(3, v.size()); ++i) cfg.norm_mean[i] = v[i];
    }
    if (j.contains("norm_std")) {
        const auto v = j["norm_std"].get<std::vector<double>>();
        for (std::size_t i = 0; i < std::min<std::size_t>(3, v.size()); ++i) cfg.norm_std[i] = v[i];
    }
    if (j.contains("output_kind")) {
        const auto s = j["output_kind"].get<std::string>();
        if (s == "auto") cfg.output_kind = ModelConfig::OutputKind::Auto;
        else if (s == "logits") cfg.output_kind = ModelConfig::OutputKind::Logits;
        else if (s == "probabilities") cfg.output_kind = ModelConfig::OutputKind::Probabilities;
        else throw Error(ErrorCode::InvalidConfig, "output_kind must be auto|logits|probabilities");
    }
    return cfg;
}

namespace {

// Bilinear sample of an 8-bit image to arbitrary target dims, output in [0,1].
cv::Mat sample_to_float(const GrayImage& img, int ow, int oh) {
    cv::Mat out(oh, ow, CV_32F);
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
            out.at<float>(y, x) = float((top * (1 - wy) + bot * wy) / 255.0);
        }
    }
    return out;
}

bool looks_like_probabilities(const cv::Mat& out) {
    const int channels = out.size[1], h = out.size[2], w = out.size[3];
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int c = 0; c < channels; ++c) {
                const float v = out.ptr<float>(0, c)[std::size_t(y) * w + x];
                if (v < 0.f || v > 1.f) return false;
                sum += v;
            }
            if (channels > 1 && std::abs(sum - 1.0) > 1e-3) return false;
        }
    }
    return true;
}

}  // namespace

struct ModelSession::Impl {
    ModelConfig config;
    cv::dnn::Net net;
};

ModelSession::ModelSession() = default;
ModelSession::~ModelSession() = default;
ModelSession::ModelSession(ModelSession&&) noexcept = default;
ModelSession& ModelSession::operator=(ModelSession&&) noexcept = default;

const ModelConfig& ModelSession::config() const { return impl_->config; }

ModelSession ModelSession::load(const ModelConfig& config) {
    config.validate();
    if (!std::filesystem::exists(config.model_path)) {
        throw Error(ErrorCode::IoFailure, "model file not found: " + config.model_path.string());
    }
    if (config.deterministic) {
        cv::setNumThreads(1);
    }

    ModelSession session;
    session.impl_ = std::make_unique<Impl>();
    session.impl_->config = config;
    try {
        session.impl_->net = cv::dnn::readNetFromONNX(config.model_path.string());
    } catch (const cv::Exception& e) {
        throw Error(ErrorCode::UnsupportedFormat,
                    "cannot load model " + config.model_path.string() + ": " + e.what());
    }

    // probe forward pass so a signature mismatch fails here, not mid-batch
    cv::Mat probe(std::vector<int>{1, config.channel_count, config.input_height, config.input_width},
                  CV_32F, cv::Scalar(0));
    cv::Mat out;
    try {
        session.impl_->net.setInput(probe);
        out = session.impl_->net.forward();
    } catch (const cv::Exception& e) {
        throw Error(ErrorCode::SignatureMismatch,
                    "model rejects input 1x" + std::to_string(config.channel_count) + "x" +
                        std::to_string(config.input_height) + "x" + std::to_string(config.input_width) +
                        ": " + e.what());
    }
    if (out.dims != 4 || out.size[0] != 1 || out.size[2] != config.input_height ||
        out.size[3] != config.input_width || out.size[1] <= config.foreground_channel_index) {
        throw Error(ErrorCode::SignatureMismatch, "model output shape does not match the declared signature");
    }
    return session;
}

ProbabilityMap ModelSession::predict_heatmap(const GrayImage& img) {
    const ModelConfig& cfg = impl_->config;
    if (img.bit_depth != 8) {
        throw Error(ErrorCode::InvalidArgument, "predict_heatmap expects an 8-bit image (apply to_8bit)");
    }
    if (cfg.deterministic) {
        cv::setNumThreads(1);
    }

    const int w = cfg.input_width, h = cfg.input_height;
    cv::Mat gray = sample_to_float(img, w, h);

    cv::Mat blob(std::vector<int>{1, cfg.channel_count, h, w}, CV_32F);
    for (int c = 0; c < cfg.channel_count; ++c) {
        const float mean = float(cfg.norm_mean[c]);
        const float stdev = float(cfg.norm_std[c]);
        float* dst = blob.ptr<float>(0, c);
        const float* src = gray.ptr<float>();
        for (std::size_t i = 0; i < std::size_t(w) * h; ++i) {
            dst[i] = (src[i] - mean) / stdev;
        }
    }

    cv::Mat out;
    try {
        impl_->net.setInput(blob);
        out = impl_->net.forward();
    } catch (const cv::Exception& e) {
        throw Error(ErrorCode::InferenceFailure, std::string("forward pass failed: ") + e.what());
    }

    const int channels = out.size[1];
    bool apply_softmax;
    switch (cfg.output_kind) {
        case ModelConfig::OutputKind::Logits: apply_softmax = true; break;
        case ModelConfig::OutputKind::Probabilities: apply_softmax = false; break;
        default: apply_softmax = !looks_like_probabilities(out); break;
    }

    ProbabilityMap map;
    map.width = w;
    map.height = h;
    map.probs.resize(std::size_t(w) * h);
    const int fg = cfg.foreground_channel_index;
    for (std::size_t i = 0; i < map.probs.size(); ++i) {
        float p;
        if (!apply_softmax) {
            p = out.ptr<float>(0, fg)[i];
        } else if (channels == 1) {
            p = 1.0f / (1.0f + std::exp(-out.ptr<float>(0, 0)[i]));
        } else {
            // softmax across class channels, max-shifted
            float mx = out.ptr<float>(0, 0)[i];
            for (int c = 1; c < channels; ++c) mx = std::max(mx, out.ptr<float>(0, c)[i]);
            float denom = 0.f;
            for (int c = 0; c < channels; ++c) denom += std::exp(out.ptr<float>(0, c)[i] - mx);
            p = std::exp(out.ptr<float>(0, fg)[i] - mx) / denom;
        }
        if (!std::isfinite(p)) {
            throw Error(ErrorCode::InferenceFailure, "non-finite model output");
        }
        map.probs[i] = std::clamp(p, 0.0f, 1.0f);
    }
    return map;
}

Mask threshold_map(const ProbabilityMap& heatmap, double threshold) {
    Mask mask = Mask::zeros(heatmap.width, heatmap.height);
    for (std::size_t i = 0; i < heatmap.probs.size(); ++i) {
        mask.bits[i] = heatmap.probs[i] >= threshold ? 1 : 0;  // >= rule
    }
    return mask;
}

SegmentResult postprocess_heatmap(const ProbabilityMap& heatmap, double threshold,
                                  double chain_scale, int out_width, int out_height,
                                  double scale_um_per_px) {
    SegmentResult res;
    res.mask = Mask::zeros(out_width, out_height);

    const Mask binary = threshold_map(heatmap, threshold);
    for (const Mask& comp : connected_components(binary)) {
        PolygonChain chain = scale_chain(trace_border(comp), chain_scale);
        for (auto& v : chain.vertices) {
            v.x = std::clamp(v.x, 0, out_width - 1);
            v.y = std::clamp(v.y, 0, out_height - 1);
        }
        const Mask filled = rasterize(chain, out_width, out_height);
        for (std::size_t i = 0; i < res.mask.bits.size(); ++i) {
            res.mask.bits[i] |= filled.bits[i];
        }
        res.chains.push_back(std::move(chain));
    }
    if (!res.mask.empty()) {
        res.measure = measure(res.mask, scale_um_per_px);
    }
    return res;
}

SegmentResult ModelSession::segment(const GrayImage& img) {
    const ModelConfig& cfg = impl_->config;
    const ProbabilityMap heatmap = predict_heatmap(img);
    return postprocess_heatmap(heatmap, cfg.threshold, 1.0 / cfg.resize_factor,
                               img.width, img.height, img.scale_um_per_px);
}

}  // namespace spheroseg
