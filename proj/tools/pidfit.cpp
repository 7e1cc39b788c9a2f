#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pidfit/commands.hpp"
#include "pidfit/errors.hpp"

namespace {

pidfit::PidGains parse_gains(const std::string& s) {
    double kp, ki, kd;
    char extra;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf%c", &kp, &ki, &kd, &extra) != 3)
        throw pidfit::ConfigError("--gains expects kp,ki,kd");
    if (kp < 0.0 || ki < 0.0 || kd < 0.0)
        throw pidfit::ConfigError("--gains must be non-negative");
    return {kp, ki, kd};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pidfit: PID tuning by desired step-response curve fitting"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string gains_str;
    std::string methods_str = "srcf,zn-reaction,zn-ultimate,lambda,pole-placement";
    std::optional<long long> seed;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "problem configuration file (JSON)")
            ->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "override optimizer seed");
    };

    CLI::App* tune = app.add_subcommand("tune", "optimize PID gains against the target response");
    add_common(tune);

    CLI::App* evaluate = app.add_subcommand("evaluate", "report metrics for fixed gains");
    add_common(evaluate);
    evaluate->add_option("--gains", gains_str, "kp,ki,kd")->required();

    CLI::App* compare = app.add_subcommand("compare", "run several tuning methods side by side");
    add_common(compare);
    compare->add_option("--methods", methods_str,
                        "comma list: srcf,zn-reaction,zn-ultimate,lambda,pole-placement");

    CLI::App* simulate = app.add_subcommand("simulate", "open-loop or fixed-gain step trace");
    add_common(simulate);
    simulate->add_option("--gains", gains_str, "kp,ki,kd (omit for the open-loop plant step)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return pidfit::kExitConfig;
    }

    try {
        pidfit::RunConfig cfg = pidfit::parse_config(config_path);
        if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);

        if (tune->parsed()) return pidfit::cmd_tune(cfg, out_dir);
        if (evaluate->parsed())
            return pidfit::cmd_evaluate(cfg, parse_gains(gains_str), out_dir);
        if (compare->parsed()) {
            std::vector<std::string> methods;
            std::string cur;
            for (char c : methods_str + ",") {
                if (c == ',') {
                    if (!cur.empty()) methods.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            return pidfit::cmd_compare(cfg, methods, out_dir);
        }
        if (simulate->parsed()) {
            std::optional<pidfit::PidGains> g;
            if (!gains_str.empty()) g = parse_gains(gains_str);
            return pidfit::cmd_simulate(cfg, g, out_dir);
        }
    } catch (const pidfit::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return pidfit::kExitConfig;
    } catch (const pidfit::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return pidfit::kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return pidfit::kExitNumeric;
    }
    return pidfit::kExitConfig;
}
