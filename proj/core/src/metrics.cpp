#include "spheroseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spheroseg {

namespace {

void check_dims(const Mask& p, const Mask& t) {
    if (p.width != t.width || p.height != t.height) {
        throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
    }
}

struct Overlap {
    std::uint64_t inter = 0;
    std::uint64_t uni = 0;
};

Overlap overlap(const Mask& p, const Mask& t) {
    Overlap o;
    for (std::size_t i = 0; i < p.bits.size(); ++i) {
        const bool a = p.bits[i], b = t.bits[i];
        o.inter += (a && b);
        o.uni += (a || b);
    }
    return o;
}

double delta_r_from_areas(double mismatch_px2, double target_px2, double scale) {
    const double d_t = 2.0 * std::sqrt(target_px2 / std::numbers::pi);
    const double r = std::sqrt(mismatch_px2 / std::numbers::pi + d_t * d_t / 4.0) - d_t / 2.0;
    return r * scale;
}

MetricSummary summarize_values(std::vector<double> v) {
    MetricSummary s;
    s.n = v.size();
    long double sum = 0.0L;
    for (double x : v) sum += x;
    s.mean = double(sum / v.size());
    long double var = 0.0L;
    for (double x : v) var += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(double(var / v.size()));  // population std
    std::sort(v.begin(), v.end());
    s.median = v[(v.size() - 1) / 2];  // lower-middle element for even n
    return s;
}

MetricSummary summarize_fraction(std::size_t count, std::size_t n) {
    MetricSummary s;
    s.n = n;
    const double p = double(count) / double(n);
    s.mean = s.median = p;
    s.std_dev = std::sqrt(p * (1.0 - p));
    s.sem_binomial = std::sqrt(p * (1.0 - p) / double(n));
    return s;
}

}  // namespace

double jcd(const Mask& p, const Mask& t) {
    check_dims(p, t);
    if (t.empty()) throw Error(ErrorCode::EmptyInput, "jcd: empty target");
    const Overlap o = overlap(p, t);
    return 1.0 - double(o.inter) / double(o.uni);
}

double relative_diff(double c_p, double c_t) {
    if (c_t <= 0.0) throw Error(ErrorCode::InvalidArgument, "relative_diff: target value must be positive");
    return std::abs(c_p - c_t) / c_t;
}

double delta_r(const Mask& p, const Mask& t, double scale_um_per_px) {
    check_dims(p, t);
    const double target = double(t.area());
    if (target == 0.0) throw Error(ErrorCode::EmptyInput, "delta_r: empty target");
    const Overlap o = overlap(p, t);
    return delta_r_from_areas(double(o.uni - o.inter), target, scale_um_per_px);
}

Classification classify(const std::vector<Mask>& p_components, const Mask& t) {
    Classification c;
    if (p_components.empty()) {
        c.invalid = true;
        return c;
    }
    const Overlap main = overlap(p_components.front(), t);
    if (main.inter == 0) {
        c.invalid = true;
        return c;
    }
    c.matched_index = 0;
    for (std::size_t i = 1; i < p_components.size(); ++i) {
        if (overlap(p_components[i], t).inter == 0) {
            c.additional = true;
            break;
        }
    }
    return c;
}

SegEval evaluate_image(const Mask& p, const Mask& t, double scale_um_per_px) {
    check_dims(p, t);
    if (t.empty()) throw Error(ErrorCode::EmptyInput, "evaluate_image: empty target");

    const SpheroidMeasure mt = measure(t, scale_um_per_px);
    const auto comps = connected_components(p);
    const Classification c = classify(comps, t);

    SegEval e;
    e.invalid = c.invalid;
    e.additional = c.additional;
    e.d_t_um = mt.diameter_um;

    if (c.invalid) {
        e.jcd = e.dd = e.cd = 1.0;
        e.delta_r_um = delta_r(Mask::zeros(t.width, t.height), t, scale_um_per_px);
        return e;
    }

    const Mask& matched = comps[*c.matched_index];
    const SpheroidMeasure mp = measure(matched, scale_um_per_px);
    e.matched_component_area_px = mp.area_px;
    e.d_p_um = mp.diameter_um;
    e.jcd = jcd(matched, t);
    e.dd = relative_diff(mp.diameter_um, mt.diameter_um);
    e.cd = relative_diff(mp.circularity, mt.circularity);
    e.delta_r_um = delta_r(matched, t, scale_um_per_px);
    return e;
}

EvalSummary summarize(const std::vector<SegEval>& evals) {
    if (evals.empty()) throw Error(ErrorCode::EmptyInput, "summarize: no evaluations");

    std::vector<double> jcds, dds, cds, drs;
    std::size_t n_invalid = 0, n_additional = 0;
    for (const auto& e : evals) {
        jcds.push_back(e.jcd);
        dds.push_back(e.dd);
        cds.push_back(e.cd);
        drs.push_back(e.delta_r_um);
        n_invalid += e.invalid;
        n_additional += e.additional;
    }

    EvalSummary s;
    s.jcd = summarize_values(std::move(jcds));
    s.dd = summarize_values(std::move(dds));
    s.cd = summarize_values(std::move(cds));
    s.delta_r_um = summarize_values(std::move(drs));
    s.isf = summarize_fraction(n_invalid, evals.size());
    s.asf = summarize_fraction(n_additional, evals.size());
    return s;
}

}  // namespace spheroseg
