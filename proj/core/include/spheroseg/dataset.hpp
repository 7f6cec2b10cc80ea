#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spheroseg {

struct DatasetRecord {
    std::string image_id;
    std::filesystem::path image_path;
    std::optional<std::filesystem::path> mask_path;
    std::string spheroid_id;
    int day = 0;  // days since treatment
    double scale_um_per_px = 2.04;
};

/// Dataset description. Canonical source is a manifest CSV with columns
/// image,mask,spheroid_id,day,scale_um_per_px (mask and scale optional);
/// the fallback scanner infers spheroid_id/day from <id>_d<day>.png names.
struct DatasetIndex {
    std::vector<DatasetRecord> records;

    static DatasetIndex from_manifest(const std::filesystem::path& csv_path);
    static DatasetIndex from_directory(const std::filesystem::path& image_dir,
                                       const std::filesystem::path& mask_dir = {},
                                       double scale_um_per_px = 2.04);
};

struct GrowthPoint {
    std::string spheroid_id;
    int day = 0;
    double diameter_um = 0.0;
    double volume_um3 = 0.0;
    double circularity = 0.0;
    std::string source;  // model | manual | otsu
};

/// Minimal CSV reader: comment lines start with '#', first remaining
/// row is the header. No quoting support beyond plain fields.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable read(const std::filesystem::path& path);
    int column(const std::string& name) const;  // -1 when absent
};

}  // namespace spheroseg
