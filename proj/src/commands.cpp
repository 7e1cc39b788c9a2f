#include "pidfit/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pidfit/baselines.hpp"
#include "pidfit/errors.hpp"
#include "pidfit/svg.hpp"

namespace pidfit {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

bool use_color() {
    return std::getenv("PIDFIT_NO_COLOR") == nullptr;
}

const char* paint(bool ok) {
    if (!use_color()) return "";
    return ok ? "\033[32m" : "\033[31m";
}

const char* reset_color() {
    return use_color() ? "\033[0m" : "";
}

json metrics_json(const MetricsReport& m) {
    json j;
    j["ts"] = m.settling_time ? json(*m.settling_time) : json(nullptr);
    j["po_pct"] = m.overshoot_pct;
    j["iae"] = m.iae;
    j["ms"] = m.ms;
    j["ms_at_omega"] = m.ms_at_omega;
    j["decay_ratio"] = m.decay_ratio ? json(*m.decay_ratio) : json(nullptr);
    j["stable"] = m.stable;
    j["final_value"] = m.final_value;
    return j;
}

json gains_json(const PidGains& g) {
    return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}};
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_response_csv(const TimeSeries& desired, const TimeSeries& actual,
                        const fs::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw NumericError("cannot write " + path.string());
    std::fprintf(f, "t,y_desired,y_actual\n");
    for (int i = 0; i < actual.grid.n_samples; ++i)
        std::fprintf(f, "%.9g,%.9g,%.9g\n", actual.grid.time(i),
                     desired.values[static_cast<std::size_t>(i)],
                     actual.values[static_cast<std::size_t>(i)]);
    std::fclose(f);
}

void write_trace_csv(const TimeSeries& y, const fs::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw NumericError("cannot write " + path.string());
    std::fprintf(f, "t,y\n");
    for (int i = 0; i < y.grid.n_samples; ++i)
        std::fprintf(f, "%.9g,%.9g\n", y.grid.time(i), y.values[static_cast<std::size_t>(i)]);
    std::fclose(f);
}

void print_summary(const std::string& method, const TuneResult& r) {
    std::printf("%s: Kp=%.4f Ki=%.4f Kd=%.4f | obj=%.6g evals=%d\n", method.c_str(), r.gains.kp,
                r.gains.ki, r.gains.kd, r.objective, r.evals_used);
    std::printf("  Ts=%s  PO=%.4f%%  IAE=%.4f  Ms=%.4f  %sstable=%s%s\n",
                r.metrics.settling_time ? (std::to_string(*r.metrics.settling_time)).c_str()
                                        : "n/a",
                r.metrics.overshoot_pct, r.metrics.iae, r.metrics.ms, paint(r.metrics.stable),
                r.metrics.stable ? "yes" : "no", reset_color());
}

int write_single_report(const RunConfig& config, const std::string& method, const TuneResult& r,
                        const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const fs::path csv = dir / "response.csv";
    const fs::path svg = dir / "plot.svg";
    const fs::path rep = dir / "report.json";

    write_response_csv(r.desired, r.response, csv);
    emit_svg({r.desired, r.response}, {"desired", method}, svg.string());

    json j;
    j["config"] = config.echo();
    j["method"] = method;
    j["gains"] = gains_json(r.gains);
    j["metrics"] = metrics_json(r.metrics);
    j["objective"] = r.objective;
    j["evals_used"] = r.evals_used;
    j["converged"] = r.converged;
    j["files"] = {{"response_csv", csv.string()}, {"plot_svg", svg.string()}};
    write_json(j, rep);

    print_summary(method, r);
    return r.metrics.stable ? kExitOk : kExitUnstable;
}

// FOTD identification for the lambda baseline: K/(1+sT) e^{-sL}.
struct FotdParams {
    double K, T, L;
};

std::optional<FotdParams> as_fotd(const TransferFunction& plant) {
    if (plant.num.degree() != 0 || plant.den.degree() != 1) return std::nullopt;
    const double b = plant.den.coeffs()[1];
    if (b == 0.0) return std::nullopt;
    return FotdParams{plant.num.coeffs()[0] / b, plant.den.coeffs()[0] / b, plant.delay};
}

// One comparison row: either a result or a skip reason.
struct Row {
    std::string method;
    std::optional<TuneResult> result;
    std::string skip_reason;
};

Row run_method(const std::string& method, const RunConfig& config, const TuneProblem& problem) {
    Row row;
    row.method = method;
    try {
        if (method == "srcf") {
            row.result = tune(problem);
        } else if (method == "zn-reaction") {
            // identification horizon: 10x the plant's dominant time constant
            double slowest = 0.0;
            for (const auto& p : poly_roots(problem.plant.den))
                if (p.real() < 0.0) slowest = std::min(slowest, p.real());
            const double tc = slowest < 0.0 ? -1.0 / slowest : 1.0;
            const SimGrid id_grid(10.0 * tc + problem.plant.delay, problem.grid.n_samples);
            row.result = evaluate(problem, zn_reaction_pid(reaction_curve(problem.plant, id_grid)));
        } else if (method == "zn-ultimate") {
            row.result = evaluate(problem, zn_ultimate(ultimate_point(problem.plant),
                                                       ZnStructure::PID));
        } else if (method == "lambda") {
            const auto fotd = as_fotd(problem.plant);
            if (!fotd) {
                row.skip_reason = "plant is not first-order-plus-delay";
                return row;
            }
            if (config.target.kind != TargetKind::fotd) {
                row.skip_reason = "target is not a FOTD specification (no Tcl)";
                return row;
            }
            row.result = evaluate(problem, lambda_pi(fotd->K, fotd->T, fotd->L, config.target.tcl));
        } else if (method == "pole-placement") {
            const auto fotd = as_fotd(problem.plant);
            if (!fotd || fotd->L != 0.0) {
                row.skip_reason = "plant is not rational first-order";
                return row;
            }
            if (std::abs(fotd->K - 1.0) > 1e-9) {
                row.skip_reason = "plant DC gain is not 1";
                return row;
            }
            if (config.target.kind != TargetKind::second_order || config.target.zeta) {
                row.skip_reason = "target is not a (PO, Ts) second-order specification";
                return row;
            }
            row.result = evaluate(problem, pole_placement_pi_first_order(
                                               fotd->T, config.target.po_pct, config.target.ts));
        } else {
            row.skip_reason = "unknown method";
        }
    } catch (const std::exception& e) {
        row.skip_reason = e.what();
    }
    return row;
}

}  // namespace

int cmd_tune(const RunConfig& config, const std::string& out_dir) {
    return write_single_report(config, "srcf", tune(config.to_problem()), out_dir);
}

int cmd_evaluate(const RunConfig& config, const PidGains& gains, const std::string& out_dir) {
    return write_single_report(config, "evaluate", evaluate(config.to_problem(), gains), out_dir);
}

int cmd_compare(const RunConfig& config, const std::vector<std::string>& methods,
                const std::string& out_dir) {
    const TuneProblem problem = config.to_problem();
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::vector<Row> rows;
    for (const auto& m : methods) rows.push_back(run_method(m, config, problem));

    int ran = 0;
    json jrows = json::array();
    std::vector<TimeSeries> traces;
    std::vector<std::string> labels;
    for (const auto& row : rows) {
        json jr;
        jr["method"] = row.method;
        if (row.result) {
            ++ran;
            jr["skipped"] = false;
            jr["gains"] = gains_json(row.result->gains);
            jr["metrics"] = metrics_json(row.result->metrics);
            jr["objective"] = row.result->objective;
            jr["evals_used"] = row.result->evals_used;
            if (traces.empty()) {
                traces.push_back(row.result->desired);
                labels.push_back("desired");
            }
            traces.push_back(row.result->response);
            labels.push_back(row.method);
            print_summary(row.method, *row.result);
        } else {
            jr["skipped"] = true;
            jr["reason"] = row.skip_reason;
            std::printf("%s: skipped (%s)\n", row.method.c_str(), row.skip_reason.c_str());
        }
        jrows.push_back(jr);
    }

    json j;
    j["config"] = config.echo();
    j["rows"] = jrows;
    write_json(j, dir / "table.json");

    std::FILE* f = std::fopen((dir / "table.csv").string().c_str(), "wb");
    if (!f) throw NumericError("cannot write table.csv");
    std::fprintf(f, "method,kp,ki,kd,ts,po_pct,iae,ms,stable,objective,skipped,reason\n");
    for (const auto& row : rows) {
        if (row.result) {
            const auto& r = *row.result;
            std::fprintf(f, "%s,%.9g,%.9g,%.9g,", row.method.c_str(), r.gains.kp, r.gains.ki,
                         r.gains.kd);
            if (r.metrics.settling_time)
                std::fprintf(f, "%.9g,", *r.metrics.settling_time);
            else
                std::fprintf(f, ",");
            std::fprintf(f, "%.9g,%.9g,%.9g,%d,%.9g,0,\n", r.metrics.overshoot_pct, r.metrics.iae,
                         r.metrics.ms, r.metrics.stable ? 1 : 0, r.objective);
        } else {
            std::fprintf(f, "%s,,,,,,,,,,1,%s\n", row.method.c_str(), row.skip_reason.c_str());
        }
    }
    std::fclose(f);

    if (!traces.empty()) emit_svg(traces, labels, (dir / "plot.svg").string());

    if (ran == 0) throw ConfigError("compare: no applicable method ran");
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, const std::optional<PidGains>& gains,
                 const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const SimGrid grid = SimGrid(config.horizon(), config.n_samples)
                             .refined_for_delay(config.plant.delay);
    TimeSeries y = gains ? simulate_closed_loop(config.plant, *gains, grid)
                         : step_response(config.plant, grid);
    write_trace_csv(y, dir / "response.csv");
    std::printf("simulate: wrote %d samples to %s\n", y.grid.n_samples,
                (dir / "response.csv").string().c_str());
    return kExitOk;
}

}  // namespace pidfit
