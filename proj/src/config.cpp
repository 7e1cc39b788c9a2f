#include "pidfit/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>

#include "pidfit/errors.hpp"

namespace pidfit {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key))
            throw ConfigError("unknown key: " + path + "." + key);
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path + ": value must be finite");
    return v;
}

std::vector<double> get_coeffs(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a coefficient array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

TransferFunction parse_tf(const json& j, const std::string& path) {
    require_keys(j, path, {"num", "den", "delay"});
    if (!j.contains("num")) throw ConfigError(path + ".num: missing");
    if (!j.contains("den")) throw ConfigError(path + ".den: missing");
    const double delay = j.contains("delay") ? get_number(j["delay"], path + ".delay") : 0.0;
    if (delay < 0.0) throw ConfigError(path + ".delay: must be >= 0");
    Polynomial num(get_coeffs(j["num"], path + ".num"));
    Polynomial den(get_coeffs(j["den"], path + ".den"));
    if (den.is_zero()) throw ConfigError(path + ".den: denominator is zero");
    return {std::move(num), std::move(den), delay};
}

DesiredSpec parse_target(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("target.kind: missing");
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "second_order") {
        require_keys(j, "target", {"kind", "Ts", "PO", "zeta", "wn"});
        if (j.contains("zeta") || j.contains("wn")) {
            if (!(j.contains("zeta") && j.contains("wn")))
                throw ConfigError("target: zeta and wn must be given together");
            if (j.contains("Ts") || j.contains("PO"))
                throw ConfigError("target: give either (PO, Ts) or (zeta, wn), not both");
            return second_order_spec_zw(get_number(j["zeta"], "target.zeta"),
                                        get_number(j["wn"], "target.wn"));
        }
        if (!j.contains("Ts")) throw ConfigError("target.Ts: missing");
        const double po = j.contains("PO") ? get_number(j["PO"], "target.PO") : 0.0;
        return second_order_spec(po, get_number(j["Ts"], "target.Ts"));
    }
    if (kind == "fotd") {
        require_keys(j, "target", {"kind", "Tcl", "L"});
        if (!j.contains("Tcl")) throw ConfigError("target.Tcl: missing");
        const double l = j.contains("L") ? get_number(j["L"], "target.L") : 0.0;
        return fotd_spec(get_number(j["Tcl"], "target.Tcl"), l);
    }
    if (kind == "custom_tf") {
        require_keys(j, "target", {"kind", "tf"});
        if (!j.contains("tf")) throw ConfigError("target.tf: missing");
        return custom_tf_spec(parse_tf(j["tf"], "target.tf"));
    }
    if (kind == "trajectory") {
        require_keys(j, "target", {"kind", "t_final", "values"});
        if (!j.contains("t_final") || !j.contains("values"))
            throw ConfigError("target: trajectory requires t_final and values");
        TimeSeries ts;
        std::vector<double> vals = get_coeffs(j["values"], "target.values");
        ts.grid = SimGrid(get_number(j["t_final"], "target.t_final"),
                          static_cast<int>(vals.size()));
        ts.values = std::move(vals);
        return trajectory_spec(std::move(ts));
    }
    throw ConfigError("target.kind: must be one of second_order, fotd, custom_tf, trajectory");
}

double parse_bound(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return TuneProblem::kUnbounded;
        throw ConfigError(path + ": expected a number or \"inf\"");
    }
    return get_number(j, path);
}

}  // namespace

double RunConfig::horizon() const {
    if (t_final) return *t_final;
    return 4.0 * target.predicted_settling();
}

TuneProblem RunConfig::to_problem() const {
    TuneProblem p;
    p.plant = plant;
    p.spec = target;
    p.bounds_lo = lo;
    p.bounds_hi = hi;
    p.grid = SimGrid(horizon(), n_samples);
    p.max_evals = max_evals;
    p.tol = tol;
    p.seed = seed;
    p.n_starts = n_starts;
    return p;
}

nlohmann::json RunConfig::echo() const {
    nlohmann::json j;
    j["plant"] = {{"num", plant.num.coeffs()}, {"den", plant.den.coeffs()}, {"delay", plant.delay}};
    nlohmann::json t;
    switch (target.kind) {
        case TargetKind::second_order:
            t["kind"] = "second_order";
            if (target.zeta && target.wn) {
                t["zeta"] = *target.zeta;
                t["wn"] = *target.wn;
            } else {
                t["PO"] = target.po_pct;
                t["Ts"] = target.ts;
            }
            break;
        case TargetKind::fotd:
            t["kind"] = "fotd";
            t["Tcl"] = target.tcl;
            t["L"] = target.fotd_delay;
            break;
        case TargetKind::custom_tf:
            t["kind"] = "custom_tf";
            t["tf"] = {{"num", target.tf->num.coeffs()},
                       {"den", target.tf->den.coeffs()},
                       {"delay", target.tf->delay}};
            break;
        case TargetKind::trajectory:
            t["kind"] = "trajectory";
            t["t_final"] = target.series->grid.t_final;
            t["values"] = target.series->values;
            break;
    }
    j["target"] = t;
    auto bound = [](double v) -> nlohmann::json {
        if (v >= TuneProblem::kUnbounded) return "inf";
        return v;
    };
    j["controller"] = {{"lo", {lo.kp, lo.ki, lo.kd}},
                       {"hi", {bound(hi.kp), bound(hi.ki), bound(hi.kd)}}};
    j["optimizer"] = {{"max_evals", max_evals}, {"tol", tol}, {"seed", seed},
                      {"n_starts", n_starts}};
    j["simulation"] = {{"t_final", horizon()}, {"n_samples", n_samples}};
    return j;
}

RunConfig parse_config_json(const nlohmann::json& j) {
    require_keys(j, "config", {"plant", "target", "controller", "optimizer", "simulation"});
    if (!j.contains("plant")) throw ConfigError("plant: missing");
    if (!j.contains("target")) throw ConfigError("target: missing");

    RunConfig cfg;
    cfg.plant = parse_tf(j["plant"], "plant");
    if (!cfg.plant.proper()) throw ConfigError("plant: must be proper (deg num <= deg den)");
    cfg.target = parse_target(j["target"]);

    if (j.contains("controller")) {
        const json& c = j["controller"];
        require_keys(c, "controller", {"lo", "hi"});
        auto triple = [](const json& a, const std::string& path, auto parse_one) {
            if (!a.is_array() || a.size() != 3)
                throw ConfigError(path + ": expected an array of 3 entries");
            return std::array<double, 3>{parse_one(a[0], path + "[0]"),
                                         parse_one(a[1], path + "[1]"),
                                         parse_one(a[2], path + "[2]")};
        };
        if (c.contains("lo")) {
            auto v = triple(c["lo"], "controller.lo", get_number);
            cfg.lo = {v[0], v[1], v[2]};
        }
        if (c.contains("hi")) {
            auto v = triple(c["hi"], "controller.hi", parse_bound);
            cfg.hi = {v[0], v[1], v[2]};
        }
    }
    if (j.contains("optimizer")) {
        const json& o = j["optimizer"];
        require_keys(o, "optimizer", {"max_evals", "tol", "seed", "n_starts"});
        if (o.contains("max_evals"))
            cfg.max_evals = static_cast<int>(get_number(o["max_evals"], "optimizer.max_evals"));
        if (o.contains("tol")) cfg.tol = get_number(o["tol"], "optimizer.tol");
        if (o.contains("seed"))
            cfg.seed = static_cast<std::uint64_t>(get_number(o["seed"], "optimizer.seed"));
        if (o.contains("n_starts"))
            cfg.n_starts = static_cast<int>(get_number(o["n_starts"], "optimizer.n_starts"));
    }
    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        require_keys(s, "simulation", {"t_final", "n_samples"});
        if (s.contains("t_final")) cfg.t_final = get_number(s["t_final"], "simulation.t_final");
        if (s.contains("n_samples"))
            cfg.n_samples = static_cast<int>(get_number(s["n_samples"], "simulation.n_samples"));
    }

    // surface invariant violations now, with config-level messages
    cfg.to_problem().validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config_json(j);
}

}  // namespace pidfit
