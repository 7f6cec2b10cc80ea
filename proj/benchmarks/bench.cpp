#include <benchmark/benchmark.h>

#include <random>

#include "spheroseg/geometry.hpp"
#include "spheroseg/image.hpp"
#include "spheroseg/metrics.hpp"
#include "spheroseg/otsu.hpp"

using namespace spheroseg;

namespace {

GrayImage acquisition_image(int bit_depth) {
    GrayImage img;
    img.width = 1300;
    img.height = 1030;
    img.bit_depth = bit_depth;
    img.scale_um_per_px = 2.04;
    img.pixels.resize(std::size_t(img.width) * img.height);
    std::mt19937 rng(1);
    const std::uint16_t max = bit_depth == 16 ? 65535 : 255;
    for (auto& p : img.pixels) p = std::uint16_t(rng() % (max + 1u));
    return img;
}

Mask disk(int n, double r) {
    Mask m = Mask::zeros(n, n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double dx = x - n / 2.0, dy = y - n / 2.0;
            if (dx * dx + dy * dy <= r * r) m.set(x, y, true);
        }
    }
    return m;
}

void bm_to_8bit(benchmark::State& state) {
    const GrayImage img = acquisition_image(16);
    for (auto _ : state) benchmark::DoNotOptimize(to_8bit(img));
}
BENCHMARK(bm_to_8bit)->Unit(benchmark::kMillisecond);

void bm_resize_half(benchmark::State& state) {
    const GrayImage img = acquisition_image(8);
    for (auto _ : state) benchmark::DoNotOptimize(resize(img, 0.5));
}
BENCHMARK(bm_resize_half)->Unit(benchmark::kMillisecond);

void bm_trace_border(benchmark::State& state) {
    const Mask m = disk(int(state.range(0)), state.range(0) / 2.5);
    for (auto _ : state) benchmark::DoNotOptimize(trace_border(m));
}
BENCHMARK(bm_trace_border)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void bm_rasterize(benchmark::State& state) {
    const int n = int(state.range(0));
    const PolygonChain chain = trace_border(disk(n, n / 2.5));
    for (auto _ : state) benchmark::DoNotOptimize(rasterize(chain, n, n));
}
BENCHMARK(bm_rasterize)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void bm_jcd(benchmark::State& state) {
    const Mask p = disk(1024, 400), t = disk(1024, 380);
    for (auto _ : state) benchmark::DoNotOptimize(jcd(p, t));
}
BENCHMARK(bm_jcd)->Unit(benchmark::kMillisecond);

void bm_evaluate_image(benchmark::State& state) {
    const Mask p = disk(1024, 400), t = disk(1024, 380);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_image(p, t, 2.04));
}
BENCHMARK(bm_evaluate_image)->Unit(benchmark::kMillisecond);

void bm_otsu_segment(benchmark::State& state) {
    GrayImage img = acquisition_image(8);
    // carve a dark disk so the threshold has something to separate
    for (int y = 400; y < 700; ++y) {
        for (int x = 500; x < 800; ++x) img.at(x, y) = img.at(x, y) % 60;
    }
    for (auto _ : state) benchmark::DoNotOptimize(otsu_segment(img, {}));
}
BENCHMARK(bm_otsu_segment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
