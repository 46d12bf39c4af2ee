#include "output.hpp"

#include <friedrichs/errors.hpp>

namespace friedrichs::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
    for (const auto& h : header) field(h);
    end_row();
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (pending_ > 0) out_ << ',';
    out_ << s;
    ++pending_;
    return *this;
}

void CsvWriter::end_row() {
    if (pending_ != columns_)
        throw std::logic_error("csv row has " + std::to_string(pending_) + " fields, expected " +
                               std::to_string(columns_));
    out_ << '\n';
    pending_ = 0;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
    f << j.dump(2) << '\n';
}

} // namespace friedrichs::cli
