#include "spheroseg/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "spheroseg/errors.hpp"

namespace spheroseg {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

void check_unique_keys(const std::vector<DatasetRecord>& records) {
    std::set<std::pair<std::string, int>> keys;
    for (const auto& r : records) {
        if (!keys.insert({r.spheroid_id, r.day}).second) {
            throw Error(ErrorCode::InvalidArgument,
                        "duplicate (spheroid_id, day) pair: " + r.spheroid_id + ", d" +
                            std::to_string(r.day));
        }
    }
}

}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read CSV: " + path.string());
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_line(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : int(it - header.begin());
}

DatasetIndex DatasetIndex::from_manifest(const std::filesystem::path& csv_path) {
    const CsvTable table = CsvTable::read(csv_path);
    const int c_image = table.column("image");
    const int c_mask = table.column("mask");
    const int c_sph = table.column("spheroid_id");
    const int c_day = table.column("day");
    const int c_scale = table.column("scale_um_per_px");
    if (c_image < 0) {
        throw Error(ErrorCode::InvalidArgument, "manifest needs an 'image' column: " + csv_path.string());
    }
    const auto base = csv_path.parent_path();

    DatasetIndex index;
    for (const auto& row : table.rows) {
        DatasetRecord rec;
        std::filesystem::path img = row[c_image];
        if (img.is_relative()) img = base / img;
        rec.image_path = img;
        rec.image_id = img.stem().string();
        if (c_mask >= 0 && int(row.size()) > c_mask && !row[c_mask].empty()) {
            std::filesystem::path mask = row[c_mask];
            if (mask.is_relative()) mask = base / mask;
            rec.mask_path = mask;
        }
        rec.spheroid_id = (c_sph >= 0 && int(row.size()) > c_sph && !row[c_sph].empty())
                              ? row[c_sph] : rec.image_id;
        if (c_day >= 0 && int(row.size()) > c_day && !row[c_day].empty()) {
            rec.day = std::stoi(row[c_day]);
        }
        if (c_scale >= 0 && int(row.size()) > c_scale && !row[c_scale].empty()) {
            rec.scale_um_per_px = std::stod(row[c_scale]);
        }
        if (!std::filesystem::exists(rec.image_path)) {
            throw Error(ErrorCode::IoFailure, "manifest image missing: " + rec.image_path.string());
        }
        if (rec.mask_path && !std::filesystem::exists(*rec.mask_path)) {
            throw Error(ErrorCode::IoFailure, "manifest mask missing: " + rec.mask_path->string());
        }
        index.records.push_back(std::move(rec));
    }
    check_unique_keys(index.records);
    return index;
}

DatasetIndex DatasetIndex::from_directory(const std::filesystem::path& image_dir,
                                          const std::filesystem::path& mask_dir,
                                          double scale_um_per_px) {
    if (!std::filesystem::is_directory(image_dir)) {
        throw Error(ErrorCode::IoFailure, "not a directory: " + image_dir.string());
    }
    static const std::regex name_re(R"((.+)_d(\d+)\.(png|tif|tiff)$)", std::regex::icase);

    DatasetIndex index;
    for (const auto& entry : std::filesystem::directory_iterator(image_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const std::string ext = entry.path().extension().string();
        if (ext != ".png" && ext != ".tif" && ext != ".tiff") continue;

        DatasetRecord rec;
        rec.image_path = entry.path();
        rec.image_id = entry.path().stem().string();
        rec.scale_um_per_px = scale_um_per_px;
        std::smatch m;
        if (std::regex_match(name, m, name_re)) {
            rec.spheroid_id = m[1];
            rec.day = std::stoi(m[2]);
        } else {
            rec.spheroid_id = rec.image_id;
        }
        if (!mask_dir.empty()) {
            const auto mask = mask_dir / (rec.image_id + ".png");
            if (std::filesystem::exists(mask)) rec.mask_path = mask;
        }
        index.records.push_back(std::move(rec));
    }
    std::sort(index.records.begin(), index.records.end(),
              [](const DatasetRecord& a, const DatasetRecord& b) { return a.image_id < b.image_id; });
    check_unique_keys(index.records);
    return index;
}

}  // namespace spheroseg
