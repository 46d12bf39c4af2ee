#include <friedrichs_cli/commands.hpp>
#include <friedrichs_cli/config.hpp>

#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace friedrichs;
using namespace friedrichs::cli;
using support::error_kind;
namespace fs = std::filesystem;

namespace {

const std::string kM1 = std::string(FRIEDRICHS_CONFIG_DIR) + "/m1.cfg";
const std::string kSweep = std::string(FRIEDRICHS_CONFIG_DIR) + "/m2_sweep.cfg";

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "friedrichs_cli_test" / name;
    fs::remove_all(dir);
    return dir;
}

struct Outcome {
    int code;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream err;
    const int code = run(args, err);
    return {code, err.str()};
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("config parsing") {
    const auto c = RunConfig::parse("# comment\nomega = 1.5\n\nlambda=0.2  # trailing\nspacing = linear\n");
    CHECK(c.number("omega") == 1.5);
    CHECK(c.number("lambda") == 0.2);
    CHECK(c.number("cutoff", 7.0) == 7.0);
    CHECK(c.spacing(Spacing::LogLinearHybrid) == Spacing::Linear);
    CHECK(RunConfig::parse("sweep_exponents = 0.5, 1,2").numbers("sweep_exponents", {}) ==
          std::vector<double>{0.5, 1.0, 2.0});

    auto message = [](const std::string& text) {
        try {
            RunConfig::parse(text, "x.cfg");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ConfigError);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("omega = 1\nbogus = 2\n").find("x.cfg:2") != std::string::npos);
    CHECK(message("omega 1\n").find("x.cfg:1") != std::string::npos);
    CHECK(message("omega =\n").find("x.cfg:1") != std::string::npos);
    CHECK(message("omega = 1\nomega = 2\n").find("x.cfg:2") != std::string::npos);
    CHECK(error_kind([] { RunConfig::parse("omega = abc\n").number("omega"); }) ==
          ErrorKind::ConfigError);
    CHECK(error_kind([] { RunConfig::parse("omega = 1\n").number("lambda"); }) ==
          ErrorKind::ConfigError);
    CHECK(error_kind([] { RunConfig::load("/nonexistent/friedrichs.cfg"); }) ==
          ErrorKind::ConfigError);
}

TEST_CASE("overrides replace file values and are validated") {
    auto c = RunConfig::parse("omega = 1\n");
    c.apply_override("omega=2.5");
    CHECK(c.number("omega") == 2.5);
    c.apply_override("lambda = 0.3");
    CHECK(c.number("lambda") == 0.3);
    CHECK(error_kind([&] { c.apply_override("nokey=1"); }) == ErrorKind::ConfigError);
    CHECK(error_kind([&] { c.apply_override("omega"); }) == ErrorKind::ConfigError);
    for (const auto& k : {"omega", "lambda", "sweep_exponents", "oracle_n", "amplitude"})
        CHECK(std::find(RunConfig::known_keys().begin(), RunConfig::known_keys().end(), k) !=
              RunConfig::known_keys().end());
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(ErrorKind::PositivityViolated) == kConfig);
    CHECK(exit_code_for(ErrorKind::ConfigError) == kConfig);
    CHECK(exit_code_for(ErrorKind::NoConvergence) == kSolver);
    CHECK(exit_code_for(ErrorKind::AmplitudeOutOfRange) == kDensityInvariant);
}

TEST_CASE("pole subcommand") {
    const auto out = scratch("pole");
    const auto r = invoke({"pole", "--config", kM1, "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    const auto j = read_json(out / "pole.json");
    CHECK(j["golden_rule_gamma"].get<double>() == doctest::Approx(0.0604).epsilon(0.01));
    CHECK(j["gamma"].get<double>() == doctest::Approx(0.05757314).epsilon(1e-6));
    CHECK(j["z0"]["re"].get<double>() == doctest::Approx(0.945569066932185).epsilon(1e-10));
    CHECK(j["omega0"].get<double>() == doctest::Approx(0.945569066932185).epsilon(1e-10));

    const auto again = scratch("pole_again");
    REQUIRE(invoke({"pole", "--config", kM1, "--out", again.string()}).code == 0);
    CHECK(slurp(out / "pole.json") == slurp(again / "pole.json"));

    const auto decoupled = scratch("pole_zero");
    REQUIRE(invoke({"pole", "--config", kM1, "--out", decoupled.string(), "--override", "lambda=0"}).code == 0);
    const auto z = read_json(decoupled / "pole.json");
    CHECK(z["gamma"].get<double>() == 0.0);
    CHECK(z["omega0"].get<double>() == 1.0);
}

TEST_CASE("usage and config errors exit 2 with a JSON message") {
    auto r = invoke({"pole", "--config", "/nonexistent.cfg"});
    CHECK(r.code == kConfig);
    auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"] == "ConfigError");
    CHECK(j["exit_code"] == 2);

    r = invoke({"pole"});
    CHECK(r.code == kConfig);
    CHECK(nlohmann::json::parse(r.err)["error"] == "UsageError");

    r = invoke({"teleport", "--config", kM1});
    CHECK(r.code == kConfig);

    r = invoke({"pole", "--config", kM1, "--out", scratch("bad").string(), "--override", "lambda=5"});
    CHECK(r.code == kConfig);
    j = nlohmann::json::parse(r.err);
    CHECK(j["error"] == "PositivityViolated");
    CHECK(j.contains("value"));

    r = invoke({"pole", "--config", kM1, "--out", scratch("bad2").string(), "--override", "nokey=1"});
    CHECK(r.code == kConfig);
}

TEST_CASE("solver failure exits 3") {
    const auto r = invoke({"pole", "--config", kM1, "--out", scratch("solver").string(),
                           "--override", "newton_tol=1e-30", "--override", "max_iter=5"});
    CHECK(r.code == kSolver);
    CHECK(nlohmann::json::parse(r.err)["error"] == "NoConvergence");
}

TEST_CASE("survival subcommand") {
    const auto out = scratch("survival");
    const auto r = invoke({"survival", "--config", kM1, "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto p = read_json(out / "phases.json");
    CHECK(p["khalfin_exponent"].get<double>() == doctest::Approx(-4.0).epsilon(0.05));
    CHECK(std::abs(p["zeno_slope"].get<double>()) < 1e-8);
    CHECK(p["gamma_fit"].get<double>() == doctest::Approx(p["gamma_pole"].get<double>()).epsilon(0.02));
    CHECK(p["dual_method"]["passed"] == true);
    CHECK(p["dual_method"]["max_abs_diff"].get<double>() < 1e-6);

    const auto rows = read_csv(out / "survival.csv");
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == std::vector<std::string>{"t", "re_delta0", "im_delta0", "P", "Gamma", "method"});
    // 17 significant digits
    const auto& cell = rows[5][1];
    std::size_t digits = 0;
    for (char ch : cell.substr(0, cell.find_first_of("eE")))
        if (std::isdigit(static_cast<unsigned char>(ch))) ++digits;
    CHECK(digits >= 16);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double pv = std::stod(rows[i][3]);
        CHECK(pv >= 0.0);
        CHECK(pv <= 1.0 + 1e-9);
    }
}

TEST_CASE("dual-method disagreement exits 4") {
    const auto r = invoke({"survival", "--config", kM1, "--out", scratch("dual").string(),
                           "--override", "dual_tol=1e-20", "--override", "t_max=20",
                           "--override", "n_points=100"});
    CHECK(r.code == kDualMethod);
    CHECK(nlohmann::json::parse(r.err).contains("value"));
}

TEST_CASE("density subcommand") {
    const auto out = scratch("density");
    REQUIRE(invoke({"density", "--config", kM1, "--out", out.string(), "--override", "c11=1"}).code == 0);
    const auto s = read_json(out / "density_summary.json");
    CHECK(s["final_rho00"].get<double>() > 0.999);
    CHECK(s["max_abs_diff_lindblad"].get<double>() <= 0.05);
    CHECK(s["max_trace_error"].get<double>() <= 1e-12);
    CHECK(s["invariant_violation"].is_null());
    const auto rows = read_csv(out / "density.csv");
    REQUIRE(rows.size() > 2);
    CHECK(rows[0][0] == "t");
    CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::stod(rows[1][4]) == doctest::Approx(0.0).epsilon(1e-6));

    const auto norm = scratch("density_norm");
    REQUIRE(invoke({"density", "--config", kM1, "--out", norm.string(), "--override",
                    "amplitude=pole_normalized"}).code == 0);
    CHECK(read_json(norm / "density_summary.json")["max_abs_diff_lindblad"].get<double>() < 1e-12);
}

TEST_CASE("density invariant violation exits 5") {
    const auto r = invoke({"density", "--config", kM1, "--out", scratch("density_bad").string(),
                           "--override", "amplitude=pole_only"});
    CHECK(r.code == kDensityInvariant);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"] == "DensityInvariantViolated");
    CHECK(j["message"].get<std::string>().find("exceeds 1") != std::string::npos);
    CHECK(j["value"].get<double>() > 1.0);
}

TEST_CASE("oracle subcommand") {
    const auto out = scratch("oracle");
    REQUIRE(invoke({"oracle", "--config", kM1, "--out", out.string(), "--override", "oracle_n=200,400",
                    "--override", "oracle_points=50", "--override", "recurrence_n=50"}).code == 0);
    const auto rep = read_json(out / "oracle_report.json");
    CHECK(rep["monotone_decreasing"] == true);
    CHECK(rep["ladder"].size() == 2);
    CHECK(rep["recurrence"]["spike"] == true);
    CHECK(rep["recurrence"]["ratio"].get<double>() > 10.0);
    const auto conv = read_csv(out / "oracle_convergence.csv");
    CHECK(conv.size() == 3);

    const auto zero = scratch("oracle_zero");
    REQUIRE(invoke({"oracle", "--config", kM1, "--out", zero.string(), "--override", "lambda=0",
                    "--override", "oracle_n=100", "--override", "oracle_scheme=gauss",
                    "--override", "oracle_omega_max=0.5", "--override", "oracle_points=20"}).code == 0);
    const auto z = read_json(zero / "oracle_report.json");
    CHECK(z["ladder"][0]["max_deviation"].get<double>() < 1e-12);
}

TEST_CASE("sweep subcommand") {
    const auto out = scratch("sweep");
    REQUIRE(invoke({"sweep", "--config", kSweep, "--out", out.string()}).code == 0);
    const auto j = read_json(out / "sweep.json");
    CHECK(j["ordering_checked"] == true);
    CHECK(j["ordering_holds"] == true);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["gamma_golden_rule"].get<double>() == doctest::Approx(0.0439867551429).epsilon(1e-6));
    CHECK(j["rows"][1]["gamma_golden_rule"].get<double>() == doctest::Approx(0.0311033328439).epsilon(1e-6));
    CHECK(j["rows"][2]["gamma_golden_rule"].get<double>() == doctest::Approx(0.0155516664220).epsilon(1e-6));

    const auto at_one = scratch("sweep_one");
    REQUIRE(invoke({"sweep", "--config", kSweep, "--out", at_one.string(), "--override", "omega=1"}).code == 0);
    CHECK(read_json(at_one / "sweep.json")["ordering_checked"] == false);

    const auto single = scratch("sweep_single");
    REQUIRE(invoke({"sweep", "--config", kSweep, "--out", single.string(), "--override",
                    "sweep_exponents=1"}).code == 0);
    CHECK(read_json(single / "sweep.json")["rows"].size() == 1);
}

TEST_CASE("ordering failure exits 6") {
    const auto r = invoke({"sweep", "--config", kSweep, "--out", scratch("sweep_bad").string(),
                           "--override", "sweep_exponents=1,1"});
    CHECK(r.code == kOrdering);
    CHECK(nlohmann::json::parse(r.err)["exit_code"] == 6);
}
