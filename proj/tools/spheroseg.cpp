// spheroseg: batch tumor-spheroid segmentation and evaluation.
//
// Subcommands: segment, eval, otsu, growth, compare-observers, augment.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <functional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spheroseg/dataset.hpp"
#include "spheroseg/geometry.hpp"
#include "spheroseg/image.hpp"
#include "spheroseg/inference.hpp"
#include "spheroseg/metrics.hpp"
#include "spheroseg/otsu.hpp"
#include "spheroseg/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spheroseg;

namespace {

constexpr const char* kSchemaComment = "# schema-version: 1";
const Rgb kPredictionColor{0, 0, 255};  // blue
const Rgb kTruthColor{0, 255, 0};       // green

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

struct CsvWriter {
    std::ofstream out;

    CsvWriter(const fs::path& path, const std::string& header) : out(path) {
        if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
        out << kSchemaComment << "\n" << header << "\n";
    }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ",";
            out << fields[i];
        }
        out << "\n";
    }
};

DatasetIndex load_dataset(const std::string& manifest, const std::string& images,
                          const std::string& masks, double scale) {
    if (!manifest.empty()) return DatasetIndex::from_manifest(manifest);
    if (!images.empty()) return DatasetIndex::from_directory(images, masks, scale);
    throw Error(ErrorCode::InvalidArgument, "need --manifest or --images");
}

/// Runs fn(i) over [0,n) on `workers` threads. Exceptions become
/// per-item error strings so one bad image cannot abort the batch.
std::vector<std::string> parallel_for(std::size_t n, int workers,
                                      const std::function<void(std::size_t)>& fn) {
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    return errors;
}

struct MeasureRow {
    std::string image_id, spheroid_id;
    int day = 0;
    bool ok = false;
    std::string error;
    double area_px = 0, perimeter_px = 0, diameter_um = 0, volume_um3 = 0, circularity = 0;
    double seconds = 0;
};

void write_measures_csv(const fs::path& path, std::vector<MeasureRow> rows, const std::string& source) {
    std::sort(rows.begin(), rows.end(),
              [](const MeasureRow& a, const MeasureRow& b) { return a.image_id < b.image_id; });
    CsvWriter csv(path,
                  "image_id,spheroid_id,day,source,area_px,perimeter_px,diameter_um,volume_um3,circularity,error");
    for (const auto& r : rows) {
        csv.row({r.image_id, r.spheroid_id, std::to_string(r.day), source,
                 r.ok ? fmt(r.area_px) : "", r.ok ? fmt(r.perimeter_px) : "",
                 r.ok ? fmt(r.diameter_um) : "", r.ok ? fmt(r.volume_um3) : "",
                 r.ok ? fmt(r.circularity) : "", r.error});
    }
}

// ---------------------------------------------------------------- segment

int cmd_segment(const std::string& manifest, const std::string& images, const std::string& masks,
                const std::string& model, const std::string& config, const fs::path& out_dir,
                int workers, double scale, bool deterministic) {
    const DatasetIndex dataset = load_dataset(manifest, images, masks, scale);
    if (dataset.records.empty()) {
        std::cerr << "no input images\n";
        return 1;
    }

    ModelConfig cfg = load_model_config(model, config.empty() ? fs::path{} : fs::path(config));
    cfg.deterministic = deterministic;
    ModelSession::load(cfg);  // validate once before spawning workers

    fs::create_directories(out_dir / "masks");
    fs::create_directories(out_dir / "chains");
    fs::create_directories(out_dir / "overlays");

    const std::size_t n = dataset.records.size();
    std::vector<MeasureRow> rows(n);

    auto run_one = [&](ModelSession& session, std::size_t i) {
        const DatasetRecord& rec = dataset.records[i];
        MeasureRow& row = rows[i];
        row.image_id = rec.image_id;
        row.spheroid_id = rec.spheroid_id;
        row.day = rec.day;

        if (!fs::exists(rec.image_path)) {
            row.error = "missing_file";
            return;
        }
        const auto t0 = std::chrono::steady_clock::now();
        GrayImage img = load_image(rec.image_path, rec.scale_um_per_px);
        img = to_8bit(img);
        const SegmentResult result = session.segment(img);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        save_mask(result.mask, out_dir / "masks" / (rec.image_id + ".png"));

        json chains = json::array();
        for (const auto& c : result.chains) chains.push_back(json::parse(chain_to_json(c)));
        std::ofstream(out_dir / "chains" / (rec.image_id + ".json")) << chains.dump(2) << "\n";

        std::vector<std::pair<PolygonChain, Rgb>> contours;
        if (rec.mask_path) {
            const Mask truth = load_mask(*rec.mask_path);
            for (const auto& comp : connected_components(truth)) {
                contours.emplace_back(trace_border(comp), kTruthColor);
            }
        }
        for (const auto& c : result.chains) contours.emplace_back(c, kPredictionColor);
        save_rgb(render_overlay(img, contours), out_dir / "overlays" / (rec.image_id + ".png"));

        if (result.measure) {
            row.ok = true;
            row.area_px = result.measure->area_px;
            row.perimeter_px = result.measure->perimeter_px;
            row.diameter_um = result.measure->diameter_um;
            row.volume_um3 = result.measure->volume_um3;
            row.circularity = result.measure->circularity;
        } else {
            row.error = "empty_detection";
        }
    };

    std::vector<std::string> errors;
    if (workers <= 1) {
        ModelSession session = ModelSession::load(cfg);
        errors = parallel_for(n, 1, [&](std::size_t i) { run_one(session, i); });
    } else {
        // one session per worker; work-stealing over a shared index
        std::atomic<std::size_t> next{0};
        errors.resize(n);
        std::vector<std::thread> pool;
        std::mutex err_mutex;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                ModelSession session = ModelSession::load(cfg);
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    try {
                        run_one(session, i);
                    } catch (const std::exception& e) {
                        std::lock_guard lock(err_mutex);
                        errors[i] = e.what();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    int failures = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty() && rows[i].error.empty()) rows[i].error = errors[i];
        if (!rows[i].error.empty() && rows[i].error != "empty_detection") ++failures;
    }

    // timings carry wall-clock data, so they go to the log, not the CSV
    {
        std::ofstream log(out_dir / "run.log");
        for (const auto& r : rows) {
            log << r.image_id << " " << (r.error.empty() ? "ok" : r.error) << " "
                << fmt(r.seconds) << "s\n";
        }
    }
    for (auto& r : rows) r.seconds = 0;
    write_measures_csv(out_dir / "measures.csv", rows, "model");

    if (failures) {
        std::cerr << failures << " of " << n << " images failed; see measures.csv\n";
        return 2;
    }
    std::cout << "segmented " << n << " images -> " << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- eval

json summary_to_json(const EvalSummary& s) {
    auto one = [](const MetricSummary& m) {
        return json{{"mean", m.mean}, {"median", m.median}, {"std", m.std_dev}, {"n", m.n}};
    };
    auto frac = [](const MetricSummary& m) {
        return json{{"fraction", m.mean}, {"sem_binomial", m.sem_binomial}, {"n", m.n}};
    };
    return json{{"jcd", one(s.jcd)},   {"dd", one(s.dd)},   {"cd", one(s.cd)},
                {"delta_r_um", one(s.delta_r_um)}, {"isf", frac(s.isf)}, {"asf", frac(s.asf)}};
}

int cmd_eval(const std::string& pred_dir, const std::string& truth_dir, double scale,
             const fs::path& out_dir, const std::string& manifest) {
    std::map<std::string, fs::path> preds, truths;
    for (const auto& e : fs::directory_iterator(pred_dir)) {
        if (e.path().extension() == ".png") preds[e.path().stem().string()] = e.path();
    }
    for (const auto& e : fs::directory_iterator(truth_dir)) {
        if (e.path().extension() == ".png") truths[e.path().stem().string()] = e.path();
    }

    std::map<std::string, std::pair<std::string, int>> meta;  // id -> (spheroid, day)
    if (!manifest.empty()) {
        for (const auto& r : DatasetIndex::from_manifest(manifest).records) {
            meta[r.image_id] = {r.spheroid_id, r.day};
        }
    }

    std::vector<std::string> ids;
    for (const auto& [id, p] : preds) {
        if (truths.count(id)) {
            ids.push_back(id);
        } else {
            std::cerr << "warning: no ground truth for " << id << ", skipped\n";
        }
    }
    for (const auto& [id, p] : truths) {
        if (!preds.count(id)) std::cerr << "warning: no prediction for " << id << ", skipped\n";
    }
    if (ids.empty()) {
        std::cerr << "no matching prediction/truth pairs\n";
        return 1;
    }

    fs::create_directories(out_dir);
    std::vector<SegEval> evals(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const Mask p = load_mask(preds[ids[i]]);
        const Mask t = load_mask(truths[ids[i]]);
        evals[i] = evaluate_image(p, t, scale);
    }

    {
        // population std; at n >= 100 the sample-vs-population difference is immaterial
        CsvWriter csv(out_dir / "per_image.csv",
                      "image_id,spheroid_id,day,jcd,dd,cd,delta_r_um,invalid,additional,d_T_um,d_P_um");
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const SegEval& e = evals[i];
            const auto [sph, day] = meta.count(ids[i]) ? meta[ids[i]] : std::pair{ids[i], 0};
            csv.row({ids[i], sph, std::to_string(day), fmt(e.jcd), fmt(e.dd), fmt(e.cd),
                     fmt(e.delta_r_um), e.invalid ? "1" : "0", e.additional ? "1" : "0",
                     fmt(e.d_t_um), fmt(e.d_p_um)});
        }
    }

    const EvalSummary s = summarize(evals);
    std::ofstream(out_dir / "summary.json") << summary_to_json(s).dump(2) << "\n";
    {
        std::ofstream txt(out_dir / "summary.txt");
        auto line = [&](const char* name, const MetricSummary& m) {
            txt << name << ": mean " << m.mean << " median " << m.median << " std " << m.std_dev
                << " (n=" << m.n << ")\n";
        };
        line("JCD", s.jcd);
        line("DD", s.dd);
        line("CD", s.cd);
        line("delta_r_um", s.delta_r_um);
        txt << "ISF: " << s.isf.mean << " +- " << s.isf.sem_binomial << "\n";
        txt << "ASF: " << s.asf.mean << " +- " << s.asf.sem_binomial << "\n";
    }
    std::cout << "evaluated " << ids.size() << " images; JCD mean " << s.jcd.mean << ", ISF "
              << s.isf.mean << ", ASF " << s.asf.mean << "\n";
    return 0;
}

// ---------------------------------------------------------------- otsu

int cmd_otsu(const std::string& manifest, const std::string& images, const std::string& masks,
             int erode_iters, const std::string& polarity, const fs::path& out_dir, int workers,
             double scale) {
    const DatasetIndex dataset = load_dataset(manifest, images, masks, scale);
    OtsuParams params;
    params.erosion_iterations = erode_iters;
    params.polarity = polarity == "bright" ? Polarity::BrightForeground : Polarity::DarkForeground;

    fs::create_directories(out_dir / "masks");
    const std::size_t n = dataset.records.size();
    std::vector<MeasureRow> rows(n);

    const auto errors = parallel_for(n, workers, [&](std::size_t i) {
        const DatasetRecord& rec = dataset.records[i];
        rows[i].image_id = rec.image_id;
        rows[i].spheroid_id = rec.spheroid_id;
        rows[i].day = rec.day;
        GrayImage img = to_8bit(load_image(rec.image_path, rec.scale_um_per_px));
        const Mask mask = otsu_segment(img, params);
        save_mask(mask, out_dir / "masks" / (rec.image_id + ".png"));
        if (mask.empty()) {
            rows[i].error = "empty_detection";
            return;
        }
        const SpheroidMeasure m = measure(mask, rec.scale_um_per_px);
        rows[i].ok = true;
        rows[i].area_px = m.area_px;
        rows[i].perimeter_px = m.perimeter_px;
        rows[i].diameter_um = m.diameter_um;
        rows[i].volume_um3 = m.volume_um3;
        rows[i].circularity = m.circularity;
    });

    int failures = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty()) {
            rows[i].error = errors[i];
            ++failures;
        }
    }
    write_measures_csv(out_dir / "measures.csv", rows, "otsu");
    std::cout << "otsu-segmented " << n << " images -> " << out_dir.string() << "\n";
    return failures ? 2 : 0;
}

// ---------------------------------------------------------------- growth

int cmd_growth(const std::string& measures_csv, const std::string& eval_csv,
               const fs::path& out_dir) {
    const CsvTable table = CsvTable::read(measures_csv);
    const int c_id = table.column("image_id");
    const int c_sph = table.column("spheroid_id");
    const int c_day = table.column("day");
    const int c_src = table.column("source");
    const int c_d = table.column("diameter_um");
    const int c_v = table.column("volume_um3");
    const int c_c = table.column("circularity");
    if (c_sph < 0 || c_day < 0) {
        throw Error(ErrorCode::InvalidArgument, "measures CSV needs spheroid_id and day columns");
    }

    std::vector<GrowthPoint> points;
    std::map<std::string, double> dt_by_image;  // for the scatter join
    for (const auto& row : table.rows) {
        if (c_d < 0 || row[c_d].empty()) continue;  // failed images carry no measure
        GrowthPoint p;
        p.spheroid_id = row[c_sph];
        p.day = std::stoi(row[c_day]);
        p.diameter_um = std::stod(row[c_d]);
        p.volume_um3 = c_v >= 0 ? std::stod(row[c_v]) : 0.0;
        p.circularity = c_c >= 0 ? std::stod(row[c_c]) : 0.0;
        p.source = c_src >= 0 ? row[c_src] : "model";
        points.push_back(std::move(p));
        if (c_id >= 0) dt_by_image[row[c_id]] = 0.0;
    }
    std::stable_sort(points.begin(), points.end(), [](const GrowthPoint& a, const GrowthPoint& b) {
        return std::tie(a.spheroid_id, a.day) < std::tie(b.spheroid_id, b.day);
    });

    fs::create_directories(out_dir);
    {
        CsvWriter csv(out_dir / "growth.csv",
                      "spheroid_id,day,diameter_um,volume_um3,circularity,source");
        for (const auto& p : points) {
            csv.row({p.spheroid_id, std::to_string(p.day), fmt(p.diameter_um), fmt(p.volume_um3),
                     fmt(p.circularity), p.source});
        }
    }

    if (!eval_csv.empty()) {
        const CsvTable ev = CsvTable::read(eval_csv);
        const int e_id = ev.column("image_id");
        const int e_jcd = ev.column("jcd");
        const int e_dr = ev.column("delta_r_um");
        const int e_dt = ev.column("d_T_um");
        if (e_id < 0 || e_jcd < 0 || e_dr < 0 || e_dt < 0) {
            throw Error(ErrorCode::InvalidArgument, "eval CSV misses required columns");
        }
        // reference split at the standard pre-treatment spheroid size
        const double split_um = 400.0;
        std::size_t above = 0, below = 0;
        CsvWriter jcsv(out_dir / "jcd_vs_dt.csv", "image_id,d_T_um,jcd");
        CsvWriter dcsv(out_dir / "dr_vs_dt.csv", "image_id,d_T_um,delta_r_um");
        for (const auto& row : ev.rows) {
            const double dt = std::stod(row[e_dt]);
            (dt >= split_um ? above : below)++;
            jcsv.row({row[e_id], fmt(dt), row[e_jcd]});
            dcsv.row({row[e_id], fmt(dt), row[e_dr]});
        }
        std::ofstream(out_dir / "split_counts.json")
            << json{{"threshold_um", split_um}, {"n_ge_threshold", above}, {"n_lt_threshold", below}}
                   .dump(2)
            << "\n";
    }
    std::cout << "growth curves for " << points.size() << " measurements -> " << out_dir.string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------- compare-observers

int cmd_compare_observers(const std::string& input_csv, double alpha, const fs::path& out_dir) {
    const CsvTable table = CsvTable::read(input_csv);
    if (table.header.size() < 3 || table.header.front() != "image_id") {
        throw Error(ErrorCode::InvalidArgument,
                    "expected wide CSV: image_id,<pair1>,<pair2>,...");
    }
    BlockMatrix m;
    m.labels.assign(table.header.begin() + 1, table.header.end());
    for (const auto& row : table.rows) {
        std::vector<double> vals;
        for (std::size_t j = 1; j < row.size(); ++j) vals.push_back(std::stod(row[j]));
        m.values.push_back(std::move(vals));
    }

    const FriedmanResult fr = friedman(m);
    const auto pairs = dunn_bonferroni(m, alpha);

    // ordering by ascending mean value (mean JCD), as reported per pair
    std::vector<std::size_t> order(m.labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> means(m.labels.size(), 0.0);
    for (const auto& row : m.values) {
        for (std::size_t j = 0; j < row.size(); ++j) means[j] += row[j];
    }
    for (auto& v : means) v /= double(m.blocks());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });

    std::cout << "Friedman statistic " << fr.statistic << " (p = " << fr.p_value
              << ", n = " << m.blocks() << ", k = " << m.treatments() << ")\n";
    std::cout << "ranking by mean value (ascending):";
    for (auto j : order) std::cout << " " << m.labels[j];
    std::cout << "\n";
    for (const auto& d : pairs) {
        std::cout << m.labels[d.i] << " vs " << m.labels[d.j] << ": z = " << d.z
                  << ", p_adj = " << d.p_adjusted << (d.significant ? " *" : "") << "\n";
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        json jr{{"statistic", fr.statistic}, {"p_value", fr.p_value},
                {"n", m.blocks()},           {"k", m.treatments()},
                {"alpha", alpha}};
        jr["ranking_ascending_mean"] = json::array();
        for (auto j : order) jr["ranking_ascending_mean"].push_back(m.labels[j]);
        std::ofstream(out_dir / "friedman.json") << jr.dump(2) << "\n";

        CsvWriter csv(out_dir / "pairwise.csv", "pair_a,pair_b,z,p_raw,p_adjusted,significant");
        for (const auto& d : pairs) {
            csv.row({m.labels[d.i], m.labels[d.j], fmt(d.z), fmt(d.p_raw), fmt(d.p_adjusted),
                     d.significant ? "1" : "0"});
        }
    }
    return 0;
}

// ---------------------------------------------------------------- augment

int cmd_augment(const std::string& manifest, const std::string& images, const std::string& masks,
                std::uint64_t seed, const fs::path& out_dir, double scale) {
    const DatasetIndex dataset = load_dataset(manifest, images, masks, scale);
    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "masks");

    const auto transforms = pick_transforms(seed, dataset.records.size());
    std::size_t done = 0;
    for (const auto& rec : dataset.records) {
        if (!rec.mask_path) {
            throw Error(ErrorCode::InvalidArgument, "unpaired mask for " + rec.image_id);
        }
        const auto t = transforms[done];
        const GrayImage img = load_image(rec.image_path, rec.scale_um_per_px);
        const Mask mask = load_mask(*rec.mask_path);
        const auto [ai, am] = augment(img, mask, t);
        const std::string stem = rec.image_id + "__" + transform_name(t);
        save_image(ai, out_dir / "images" / (stem + ".png"));
        save_mask(am, out_dir / "masks" / (stem + ".png"));
        ++done;
    }
    std::cout << "augmented " << done << " pairs -> " << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tumor spheroid segmentation and evaluation toolkit"};
    app.require_subcommand(1);

    std::string manifest, images, masks, model, config, pred_dir, truth_dir, measures_csv,
        eval_csv, input_csv, polarity = "dark";
    std::string out_dir = "out";
    int workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    double scale = 2.04;
    std::uint64_t seed = 0;
    int erode_iters = 0;
    double alpha = 0.005;
    bool deterministic = false;

    auto add_dataset_opts = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest, "dataset manifest CSV");
        sub->add_option("--images", images, "image directory (fallback when no manifest)");
        sub->add_option("--masks", masks, "ground-truth mask directory");
        sub->add_option("--scale-um-per-px", scale, "physical scale, micrometers per pixel");
    };

    auto* seg = app.add_subcommand("segment", "run model inference over a dataset");
    add_dataset_opts(seg);
    seg->add_option("--model", model, "ONNX model file")->required();
    seg->add_option("--config", config, "model sidecar JSON (default: <model>.json)");
    seg->add_option("--out-dir", out_dir, "output directory");
    seg->add_option("--workers", workers, "parallel workers");
    seg->add_flag("--deterministic", deterministic, "single-threaded backend execution");

    auto* ev = app.add_subcommand("eval", "evaluate predicted masks against ground truth");
    ev->add_option("--pred-dir", pred_dir, "predicted mask directory")->required();
    ev->add_option("--truth-dir", truth_dir, "ground-truth mask directory")->required();
    ev->add_option("--scale-um-per-px", scale, "physical scale");
    ev->add_option("--manifest", manifest, "manifest CSV for spheroid_id/day metadata");
    ev->add_option("--out-dir", out_dir, "output directory");

    auto* ot = app.add_subcommand("otsu", "classical Otsu baseline segmentation");
    add_dataset_opts(ot);
    ot->add_option("--erode", erode_iters, "grayscale erosion iterations before thresholding");
    ot->add_option("--polarity", polarity, "dark|bright foreground")
        ->check(CLI::IsMember({"dark", "bright"}));
    ot->add_option("--out-dir", out_dir, "output directory");
    ot->add_option("--workers", workers, "parallel workers");

    auto* gr = app.add_subcommand("growth", "assemble per-spheroid growth curves");
    gr->add_option("--measures", measures_csv, "measures CSV from segment/otsu")->required();
    gr->add_option("--eval", eval_csv, "per-image eval CSV for diameter-vs-metric scatter");
    gr->add_option("--out-dir", out_dir, "output directory");

    auto* co = app.add_subcommand("compare-observers", "Friedman + Dunn-Bonferroni over observer pairs");
    co->add_option("--input", input_csv, "wide CSV: image_id,<pair1>,<pair2>,...")->required();
    co->add_option("--alpha", alpha, "significance level");
    co->add_option("--out-dir", out_dir, "output directory");

    auto* au = app.add_subcommand("augment", "randomized flip/rotation dataset preparation");
    add_dataset_opts(au);
    au->add_option("--seed", seed, "RNG seed");
    au->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seg->parsed()) {
            return cmd_segment(manifest, images, masks, model, config, out_dir, workers, scale,
                               deterministic);
        }
        if (ev->parsed()) return cmd_eval(pred_dir, truth_dir, scale, out_dir, manifest);
        if (ot->parsed()) {
            return cmd_otsu(manifest, images, masks, erode_iters, polarity, out_dir, workers, scale);
        }
        if (gr->parsed()) return cmd_growth(measures_csv, eval_csv, out_dir);
        if (co->parsed()) return cmd_compare_observers(input_csv, alpha, out_dir);
        if (au->parsed()) return cmd_augment(manifest, images, masks, seed, out_dir, scale);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
