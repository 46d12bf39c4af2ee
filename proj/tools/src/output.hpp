#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace friedrichs::cli {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& operator<<(double v) { return field(fmt17(v)); }
    CsvWriter& operator<<(int v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(const std::string& v) { return field(v); }
    CsvWriter& operator<<(const char* v) { return field(v); }
    void end_row();

private:
    CsvWriter& field(const std::string& s);

    std::ofstream out_;
    std::size_t columns_;
    std::size_t pending_{0};
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Finite doubles as numbers, everything else as null.
inline nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace friedrichs::cli
