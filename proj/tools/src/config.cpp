#include "friedrichs_cli/config.hpp"

#include <friedrichs/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace friedrichs::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> to_double(const std::string& s) {
    double v{};
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorKind::ConfigError, message);
}

} // namespace

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys = {
        // model
        "omega", "lambda", "exponent", "cutoff", "prefactor",
        // quadrature
        "abs_tol", "rel_tol", "max_subdivisions", "truncation_multiple",
        // pole search
        "newton_tol", "max_iter",
        // time grid
        "t_max", "t_units", "n_points", "spacing",
        // survival
        "ray_angle", "dual_horizon", "dual_points", "dual_tol", "exp_window_lo",
        "exp_window_hi", "khalfin_window_lo", "khalfin_window_hi", "zeno_fraction",
        // density
        "c11", "c10_re", "c10_im", "lindblad_frequency", "amplitude",
        // oracle
        "oracle_n", "oracle_omega_max", "oracle_scheme", "oracle_window_fraction",
        "oracle_points", "recurrence_n", "recurrence_omega_max",
        // sweep
        "sweep_exponents",
    };
    return keys;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& source) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) config_error(where + ": expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) config_error(where + ": empty key");
        if (value.empty()) config_error(where + ": key '" + key + "' has no value");
        if (cfg.entries_.count(key))
            config_error(where + ": key '" + key + "' repeats " + cfg.entries_.at(key).origin);
        cfg.set(key, value, where);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) config_error("cannot open config file '" + path.string() + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str(), path.string());
}

void RunConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        config_error("--override '" + assignment + "': expected key=value");
    const std::string key = trim(std::string_view(assignment).substr(0, eq));
    const std::string value = trim(std::string_view(assignment).substr(eq + 1));
    if (key.empty() || value.empty())
        config_error("--override '" + assignment + "': expected key=value");
    set(key, value, "--override");
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        config_error(origin + ": unknown key '" + key + "'");
    entries_[key] = {value, origin};
}

const RunConfig::Entry* RunConfig::find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void RunConfig::fail(const std::string& key, const std::string& what) const {
    const Entry* e = find(key);
    config_error((e ? e->origin + ": " : std::string()) + "key '" + key + "' " + what);
}

double RunConfig::number(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) config_error("missing required key '" + key + "'");
    const auto v = to_double(e->value);
    if (!v) fail(key, "is not a finite number: '" + e->value + "'");
    return *v;
}

double RunConfig::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int RunConfig::integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = find(key)->value;
    int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(key, "is not an integer: '" + s + "'");
    return v;
}

std::string RunConfig::word(const std::string& key, const std::string& fallback) const {
    return has(key) ? find(key)->value : fallback;
}

std::vector<double> RunConfig::numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(find(key)->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = to_double(trim(item));
        if (!v) fail(key, "has a non-numeric list item '" + trim(item) + "'");
        out.push_back(*v);
    }
    if (out.empty()) fail(key, "is an empty list");
    return out;
}

ModelParams RunConfig::model() const {
    return build_model(number("omega"), number("lambda"), number("exponent"), number("cutoff"),
                       number("prefactor", 1.0));
}

QuadConfig RunConfig::quad() const {
    QuadConfig q;
    q.abs_tol = number("abs_tol", q.abs_tol);
    q.rel_tol = number("rel_tol", q.rel_tol);
    q.max_subdivisions = integer("max_subdivisions", q.max_subdivisions);
    q.upper_truncation_multiple = number("truncation_multiple", q.upper_truncation_multiple);
    try {
        q.validate();
    } catch (const Error& e) {
        config_error(std::string("quadrature settings: ") + e.what());
    }
    return q;
}

Spacing RunConfig::spacing(Spacing fallback) const {
    if (!has("spacing")) return fallback;
    const std::string s = word("spacing", "");
    if (s == "linear") return Spacing::Linear;
    if (s == "hybrid") return Spacing::LogLinearHybrid;
    fail("spacing", "must be 'linear' or 'hybrid', got '" + s + "'");
}

BathScheme RunConfig::scheme(BathScheme fallback) const {
    if (!has("oracle_scheme")) return fallback;
    const std::string s = word("oracle_scheme", "");
    if (s == "uniform") return BathScheme::Uniform;
    if (s == "gauss") return BathScheme::GaussNodes;
    fail("oracle_scheme", "must be 'uniform' or 'gauss', got '" + s + "'");
}

} // namespace friedrichs::cli
