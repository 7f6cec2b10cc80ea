#pragma once

#include <optional>
#include <vector>

#include "spheroseg/geometry.hpp"
#include "spheroseg/image.hpp"

namespace spheroseg {

/// Per-image segmentation evaluation record.
struct SegEval {
    double jcd = 0.0;
    double dd = 0.0;
    double cd = 0.0;
    double delta_r_um = 0.0;
    bool invalid = false;     // ISF contributor
    bool additional = false;  // ASF contributor
    double matched_component_area_px = 0.0;
    double d_t_um = 0.0;  // target diameter
    double d_p_um = 0.0;  // matched prediction diameter (0 when invalid)
};

struct MetricSummary {
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;  // population
    std::size_t n = 0;
    double sem_binomial = 0.0;  // only meaningful for fraction metrics
};

/// Summary over a list of evaluations.
struct EvalSummary {
    MetricSummary jcd, dd, cd, delta_r_um;
    MetricSummary isf, asf;  // mean = fraction, sem_binomial = sqrt(p(1-p)/n)
};

/// Jaccard coefficient distance 1 - |P&T|/|P|T|. Empty P -> 1.
double jcd(const Mask& p, const Mask& t);

/// |c_p - c_t| / c_t, used for diameter (DD) and circularity (CD) deviation.
double relative_diff(double c_p, double c_t);

/// Average radial error: thickness of the circular layer whose area equals
/// the mismatched area around a circle with the target area, in micrometers.
double delta_r(const Mask& p, const Mask& t, double scale_um_per_px);

struct Classification {
    std::optional<std::size_t> matched_index;  // index into the component list
    bool invalid = false;
    bool additional = false;
};

/// Applies the largest-component rule to a prediction split into
/// components (sorted by descending area). invalid when the largest
/// component is absent or disjoint from the target; additional when a
/// further component has zero overlap with the target.
Classification classify(const std::vector<Mask>& p_components, const Mask& t);

/// Full per-image evaluation. invalid forces jcd = dd = cd = 1 and
/// delta_r computed from an empty prediction.
SegEval evaluate_image(const Mask& p, const Mask& t, double scale_um_per_px);

EvalSummary summarize(const std::vector<SegEval>& evals);

}  // namespace spheroseg
