// Flat key=value run configuration.
//
//   # comment
//   omega = 1.0
//   lambda = 0.1
//
// One key per line; blank lines and text after '#' are ignored. Values given
// with --override replace file values and are validated the same way.

#pragma once

#include <friedrichs/model.hpp>
#include <friedrichs/oracle.hpp>
#include <friedrichs/timegrid.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace friedrichs::cli {

class RunConfig {
public:
    static RunConfig parse(const std::string& text, const std::string& source = "<config>");
    static RunConfig load(const std::filesystem::path& path);

    /// `key=value`; throws ConfigError on malformed input or unknown keys.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::string word(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;

    ModelParams model() const;
    QuadConfig quad() const;
    Spacing spacing(Spacing fallback) const;
    BathScheme scheme(BathScheme fallback) const;

    /// Every key the parser accepts.
    static const std::vector<std::string>& known_keys();

private:
    struct Entry {
        std::string value;
        std::string origin;  ///< "file:line" or "--override"
    };

    void set(const std::string& key, const std::string& value, const std::string& origin);
    const Entry* find(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    std::map<std::string, Entry> entries_;
};

} // namespace friedrichs::cli
