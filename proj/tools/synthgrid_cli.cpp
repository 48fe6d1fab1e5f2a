// synthgrid command-line driver. Talks to the library only through the C API.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synthgrid/synthgrid.h"

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> windows;
    std::optional<std::size_t> window_hours;
};

void print_log(void*, sg_log_level level, const char* message) {
    if (level == SG_LOG_WARNING) {
        std::fprintf(stderr, "warning: %s\n", message);
    } else {
        std::printf("%s\n", message);
    }
}

int report_failure(const std::string& context, sg_status status) {
    std::fprintf(stderr, "error: %s: %s: %s\n", context.c_str(), sg_status_name(status), sg_last_error());
    return 1;
}

// defaults < config file < SYNTHGRID_* environment < flags
sg_config* make_config(const Flags& f, int& exit_code) {
    sg_config* config = nullptr;
    sg_status st = f.config.empty() ? sg_config_new(&config) : sg_config_load(f.config.c_str(), &config);
    if (st != SG_OK) {
        exit_code = report_failure("config", st);
        return nullptr;
    }
    std::vector<std::pair<std::string, std::string>> overrides;
    if (f.seed) overrides.emplace_back("run.seed", std::to_string(*f.seed));
    if (!f.out.empty()) overrides.emplace_back("run.out", std::filesystem::absolute(f.out).string());
    if (f.windows) overrides.emplace_back("harness.windows", std::to_string(*f.windows));
    if (f.window_hours) overrides.emplace_back("harness.window_hours", std::to_string(*f.window_hours));
    st = sg_config_apply_env(config, nullptr, nullptr);
    for (const auto& [key, value] : overrides) {
        if (st != SG_OK) break;
        st = sg_config_set(config, key.c_str(), value.c_str());
    }
    if (st != SG_OK) {
        exit_code = report_failure("config", st);
        sg_config_free(config);
        return nullptr;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic grid calibration, profile synthesis and rolling-horizon DC OPF validation"};
    app.require_subcommand(1);
    Flags flags;
    std::string env_help = "Settings may also come from SYNTHGRID_<SECTION>_<KEY> environment variables, e.g. "
                           "SYNTHGRID_HARNESS_WINDOW_HOURS. Precedence: flags > environment > config file > defaults.";
    app.footer(env_help);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config, "Run config file (TOML subset)");
        cmd->add_option("--seed", flags.seed, "Random seed (u64)");
        cmd->add_option("--out", flags.out, "Output directory");
        cmd->add_option("--windows", flags.windows, "Simulate only the first K windows (0 = all)");
        cmd->add_option("--window-hours", flags.window_hours, "Window length W in hours");
    };

    struct Stage {
        const char* name;
        const char* help;
    };
    const Stage stages[] = {
        {"build", "Calibrate the raw case and write out/case"},
        {"profiles", "Build demand, wind, solar and hydro profiles into out/profiles"},
        {"simulate", "Run the rolling-horizon dispatch into out/simulate"},
        {"upgrade", "Upgrade congested branches into out/upgrade"},
        {"report", "Compare against historical generation and revise costs into out/report"},
        {"all", "Run build, profiles, simulate, upgrade and report in order"},
    };
    std::vector<std::pair<CLI::App*, std::string>> commands;
    for (const auto& s : stages) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd);
        commands.emplace_back(cmd, s.name);
    }
    auto* keys = app.add_subcommand("keys", "List config keys and their environment variable names");

    CLI11_PARSE(app, argc, argv);

    if (keys->parsed()) {
        for (std::size_t i = 0; i < sg_config_key_count(); ++i) {
            std::string key = sg_config_key(i);
            std::string env = "SYNTHGRID_";
            for (char c : key) env += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            std::printf("%-38s %s\n", key.c_str(), env.c_str());
        }
        return 0;
    }

    std::string selected;
    for (const auto& [cmd, name] : commands) {
        if (cmd->parsed()) selected = name;
    }
    int exit_code = 0;
    sg_config* config = make_config(flags, exit_code);
    if (!config) return exit_code;

    std::vector<std::string> run;
    if (selected == "all") {
        run = {"build", "profiles", "simulate", "upgrade", "report"};
    } else {
        run = {selected};
    }
    for (const auto& stage : run) {
        sg_status st = sg_run_stage(config, stage.c_str(), print_log, nullptr);
        if (st != SG_OK) {
            exit_code = report_failure("stage " + stage, st);
            break;
        }
    }
    sg_config_free(config);
    return exit_code;
}
