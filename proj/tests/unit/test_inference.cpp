#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "spheroseg/inference.hpp"
#include "spheroseg/metrics.hpp"
#include "support/synthetic.hpp"

using namespace spheroseg;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() { return fs::path(SPHEROSEG_TEST_DATA_DIR); }

// test model: 1x1 conv, foreground iff normalized intensity < 0.35
ModelConfig tiny_config() {
    return load_model_config(data_dir() / "tiny_model.onnx");
}

ModelConfig small_tiny_config(int w = 64, int h = 64) {
    ModelConfig cfg = tiny_config();
    cfg.input_width = w;
    cfg.input_height = h;
    return cfg;
}

GrayImage dark_disk_scene(int width, int height, double cx, double cy, double r,
                          std::uint16_t fg, std::uint16_t bg) {
    GrayImage img = testsupport::gray_image(width, height, bg, 8);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) img.at(x, y) = fg;
        }
    }
    return img;
}

ProbabilityMap map_from(int width, int height, std::vector<float> probs) {
    ProbabilityMap m;
    m.width = width;
    m.height = height;
    m.probs = std::move(probs);
    return m;
}

}  // namespace

TEST_CASE("load_model_config reads the sidecar and keeps defaults elsewhere") {
    const ModelConfig cfg = tiny_config();
    CHECK(cfg.input_width == 650);
    CHECK(cfg.input_height == 515);
    CHECK(cfg.resize_factor == doctest::Approx(0.5));
    CHECK(cfg.channel_count == 3);
    CHECK(cfg.norm_mean[0] == doctest::Approx(0.0));
    CHECK(cfg.norm_std[0] == doctest::Approx(1.0));
    CHECK(cfg.foreground_channel_index == 1);
    CHECK(cfg.threshold == doctest::Approx(0.5));
}

TEST_CASE("config validation rejects nonsense values") {
    ModelConfig cfg = tiny_config();
    cfg.threshold = 1.5;
    try {
        cfg.validate();
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
    cfg = tiny_config();
    cfg.resize_factor = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = tiny_config();
    cfg.foreground_channel_index = -1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("loading a missing model file fails") {
    ModelConfig cfg = tiny_config();
    cfg.model_path = data_dir() / "no_such_model.onnx";
    CHECK_THROWS_AS((void)ModelSession::load(cfg), Error);
}

TEST_CASE("channel count mismatch is caught at load time") {
    ModelConfig cfg = small_tiny_config();
    cfg.channel_count = 1;
    try {
        (void)ModelSession::load(cfg);
        FAIL("expected signature mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SignatureMismatch);
    }
}

TEST_CASE("predict_heatmap separates dark foreground from bright background") {
    ModelSession session = ModelSession::load(small_tiny_config());
    const GrayImage img = dark_disk_scene(128, 128, 64, 64, 30, 40, 220);
    const ProbabilityMap heat = session.predict_heatmap(img);
    REQUIRE(heat.width == 64);
    REQUIRE(heat.height == 64);
    for (float p : heat.probs) {
        CHECK(p >= 0.0f);
        CHECK(p <= 1.0f);
    }
    CHECK(heat.at(32, 32) > 0.9f);  // disk center, dark
    CHECK(heat.at(2, 2) < 0.1f);    // corner, bright
}

TEST_CASE("predict_heatmap requires an 8-bit image") {
    ModelSession session = ModelSession::load(small_tiny_config());
    const GrayImage deep = testsupport::gray_image(32, 32, 1000, 16);
    CHECK_THROWS_AS((void)session.predict_heatmap(deep), Error);
}

TEST_CASE("inference is deterministic across sessions") {
    ModelConfig cfg = small_tiny_config();
    cfg.deterministic = true;
    GrayImage img = testsupport::gray_image(100, 90, 0, 8);
    std::mt19937 rng(63);
    for (auto& p : img.pixels) p = std::uint16_t(rng() % 256);

    ModelSession a = ModelSession::load(cfg);
    ModelSession b = ModelSession::load(cfg);
    const ProbabilityMap ha = a.predict_heatmap(img);
    const ProbabilityMap hb = a.predict_heatmap(img);  // same session, repeated
    const ProbabilityMap hc = b.predict_heatmap(img);  // fresh session
    CHECK(ha.probs == hb.probs);
    CHECK(ha.probs == hc.probs);
}

TEST_CASE("threshold_map uses the inclusive >= rule") {
    const ProbabilityMap heat = map_from(3, 1, {0.4999f, 0.5f, 0.8f});
    const Mask m = threshold_map(heat, 0.5);
    CHECK_FALSE(m.at(0, 0));
    CHECK(m.at(1, 0));
    CHECK(m.at(2, 0));
}

TEST_CASE("raising the threshold never grows the mask") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> probs(30 * 20);
    for (auto& p : probs) p = u(rng);
    const ProbabilityMap heat = map_from(30, 20, probs);
    Mask prev = threshold_map(heat, 0.0);
    CHECK(prev.area() == probs.size());
    for (double t : {0.2, 0.5, 0.8, 1.0}) {
        const Mask cur = threshold_map(heat, t);
        for (std::size_t i = 0; i < cur.bits.size(); ++i) {
            if (cur.bits[i]) CHECK(prev.bits[i]);
        }
        prev = cur;
    }
}

TEST_CASE("postprocess_heatmap lifts a half-resolution disk back to full size") {
    const int hw = 50, hh = 40;
    std::vector<float> probs(std::size_t(hw) * hh, 0.0f);
    const Mask half_disk = testsupport::disk_mask(hw, hh, 25, 20, 12);
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = half_disk.bits[i] ? 0.9f : 0.1f;
    const SegmentResult res =
        postprocess_heatmap(map_from(hw, hh, probs), 0.5, 2.0, 100, 80, 2.04);

    REQUIRE(res.chains.size() == 1);
    REQUIRE(res.measure.has_value());
    CHECK(res.mask.width == 100);
    CHECK(res.mask.height == 80);
    const Mask full_disk = testsupport::disk_mask(100, 80, 50, 40, 24);
    CHECK(jcd(res.mask, full_disk) < 0.15);
    // area scales by ~4 relative to the half-resolution detection
    const double ratio = double(res.mask.area()) / double(half_disk.area());
    CHECK(ratio > 3.4);
    CHECK(ratio < 4.6);
    // nearest-neighbor upscale of the thresholded map is a close cross-check
    const Mask nn = resize_nearest(half_disk, 2.0);
    CHECK(jcd(res.mask, nn) < 0.1);
}

TEST_CASE("postprocess_heatmap returns one chain per detected component") {
    const int hw = 60, hh = 30;
    std::vector<float> probs(std::size_t(hw) * hh, 0.0f);
    Mask blobs = testsupport::disk_mask(hw, hh, 15, 15, 6);
    const Mask second = testsupport::disk_mask(hw, hh, 45, 15, 4);
    for (std::size_t i = 0; i < blobs.bits.size(); ++i) blobs.bits[i] |= second.bits[i];
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = blobs.bits[i] ? 1.0f : 0.0f;
    const SegmentResult res =
        postprocess_heatmap(map_from(hw, hh, probs), 0.5, 2.0, 120, 60, 1.0);
    CHECK(res.chains.size() == 2);
    CHECK(connected_components(res.mask).size() == 2);
    REQUIRE(res.measure.has_value());
    // measure reflects the larger blob
    CHECK(res.measure->area_px == doctest::Approx(double(connected_components(res.mask)[0].area())));
}

TEST_CASE("postprocess_heatmap with nothing above threshold yields an empty result") {
    const SegmentResult res =
        postprocess_heatmap(map_from(8, 8, std::vector<float>(64, 0.1f)), 0.5, 2.0, 16, 16, 1.0);
    CHECK(res.mask.empty());
    CHECK(res.chains.empty());
    CHECK_FALSE(res.measure.has_value());
}

TEST_CASE("end-to-end segmentation of a dark disk at full acquisition size") {
    ModelSession session = ModelSession::load(tiny_config());
    const GrayImage img = dark_disk_scene(1300, 1030, 650, 515, 200, 40, 220);
    const SegmentResult res = session.segment(img);
    REQUIRE(res.measure.has_value());
    REQUIRE(!res.chains.empty());
    CHECK(res.mask.width == 1300);
    CHECK(res.mask.height == 1030);

    const Mask want = testsupport::disk_mask(1300, 1030, 650, 515, 200);
    CHECK(jcd(res.mask, want) < 0.05);
    // 400 px diameter at 2.04 um/px
    CHECK(res.measure->diameter_um == doctest::Approx(400.0 * 2.04).epsilon(0.05));
}
