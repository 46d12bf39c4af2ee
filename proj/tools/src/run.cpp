#include "friedrichs_cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <map>
#include <ostream>

namespace friedrichs::cli {

namespace {

void report(std::ostream& err, int code, const std::string& kind, const std::string& message,
            std::optional<double> value) {
    nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (value && std::isfinite(*value)) j["value"] = *value;
    err << j.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
    static const std::map<std::string, std::function<void(const RunConfig&, const OutDir&)>>
        commands = {{"pole", cmd_pole},
                    {"survival", cmd_survival},
                    {"density", cmd_density},
                    {"oracle", cmd_oracle},
                    {"sweep", cmd_sweep}};

    CLI::App app{"Resonance, survival and reduced-density runs for the Friedrichs model", "friedrichs"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "./out";
    std::vector<std::string> overrides;
    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key=value config file")->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--override", overrides, "key=value, repeatable")->take_all();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report(err, kConfig, "UsageError", e.what(), std::nullopt);
        return kConfig;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        auto cfg = RunConfig::load(config_path);
        for (const auto& o : overrides) cfg.apply_override(o);
        commands.at(name)(cfg, out_dir);
        return kOk;
    } catch (const CheckFailed& e) {
        report(err, e.code(), e.kind(), e.what(), e.value());
        return e.code();
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        report(err, code, std::string(to_string(e.kind())), e.what(), e.value());
        return code;
    } catch (const std::exception& e) {
        report(err, kSolver, "InternalError", e.what(), std::nullopt);
        return kSolver;
    }
}

} // namespace friedrichs::cli
