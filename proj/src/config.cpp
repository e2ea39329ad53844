#include "quasih/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "quasih/analytics.hpp"
#include "quasih/rng.hpp"

namespace quasih {

using nlohmann::json;

namespace {

const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& where, const char* key) {
    const json* v = find(j, key);
    if (!v || !v->is_number())
        throw ConfigError("config field '" + where + "." + key + "' must be a number");
    return v->get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    const json* v = find(j, key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
    return v->get<double>();
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ScenarioConfig cfg;

    const json* model = find(j, "model");
    if (!model || !model->is_object()) throw ConfigError("config requires a 'model' object");
    cfg.nu = number_or(*model, "nu", 1.0);
    cfg.g = number_or(*model, "g", 1.0);
    cfg.kappa = number_or(*model, "kappa", 0.0);
    const double n_bath = number_or(*model, "n_bath", 1.0);
    if (n_bath != std::floor(n_bath))
        throw ConfigError("config field 'model.n_bath' must be an integer");
    cfg.n_bath = static_cast<int>(n_bath);
    cfg.x = number_or(*model, "x", 1.0);

    const json* initial = find(j, "initial");
    if (!initial || !initial->is_object()) throw ConfigError("config requires an 'initial' object");
    const json* imode = find(*initial, "mode");
    if (!imode || !imode->is_string())
        throw ConfigError("config field 'initial.mode' must be \"amplitudes\" or \"alpha\"");
    cfg.initial.mode = imode->get<std::string>();
    if (cfg.initial.mode == "amplitudes") {
        cfg.initial.a_re = need_number(*initial, "initial", "A_re");
        cfg.initial.a_im = number_or(*initial, "A_im", 0.0);
        cfg.initial.b_re = need_number(*initial, "initial", "B_re");
        cfg.initial.b_im = number_or(*initial, "B_im", 0.0);
    } else if (cfg.initial.mode == "alpha") {
        cfg.initial.alpha = need_number(*initial, "initial", "alpha");
        cfg.initial.phase1 = number_or(*initial, "phase1", 0.0);
        cfg.initial.phase2 = number_or(*initial, "phase2", 0.0);
    } else {
        throw ConfigError("config field 'initial.mode' must be \"amplitudes\" or \"alpha\"");
    }

    const json* unitary = find(j, "unitary");
    if (!unitary || !unitary->is_object()) throw ConfigError("config requires a 'unitary' object");
    const json* umode = find(*unitary, "mode");
    if (!umode || !umode->is_string())
        throw ConfigError("config field 'unitary.mode' must be \"matrix\", \"real_cd\" or \"random\"");
    cfg.unitary.mode = umode->get<std::string>();
    if (cfg.unitary.mode == "matrix") {
        const json* entries = find(*unitary, "entries");
        if (!entries || !entries->is_array() || entries->size() != 4)
            throw ConfigError("config field 'unitary.entries' must list [re, im] for a, b, c, d");
        for (const json& e : *entries) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ConfigError("config field 'unitary.entries' must list [re, im] pairs");
            cfg.unitary.entries.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
    } else if (cfg.unitary.mode == "real_cd") {
        cfg.unitary.c = need_number(*unitary, "unitary", "c");
    } else if (cfg.unitary.mode == "random") {
        if (const json* s = find(*unitary, "seed")) {
            if (!s->is_number_unsigned())
                throw ConfigError("config field 'unitary.seed' must be an unsigned integer");
            cfg.unitary.seed = s->get<std::uint64_t>();
        }
    } else {
        throw ConfigError("config field 'unitary.mode' must be \"matrix\", \"real_cd\" or \"random\"");
    }

    if (const json* grid = find(j, "grid")) {
        if (!grid->is_object()) throw ConfigError("config field 'grid' must be an object");
        cfg.t_max = number_or(*grid, "t_max", 0.0);
        const double samples = number_or(*grid, "samples", 1024.0);
        if (samples < 2 || samples != std::floor(samples))
            throw ConfigError("config field 'grid.samples' must be an integer >= 2");
        cfg.samples = static_cast<std::size_t>(samples);
    }

    if (const json* output = find(j, "output")) {
        if (!output->is_object()) throw ConfigError("config field 'output' must be an object");
        if (const json* p = find(*output, "path")) {
            if (!p->is_string()) throw ConfigError("config field 'output.path' must be a string");
            cfg.out_path = p->get<std::string>();
        }
        if (const json* f = find(*output, "format")) {
            const std::string fmt = f->is_string() ? f->get<std::string>() : std::string();
            if (fmt == "csv")
                cfg.format = OutputFormat::Csv;
            else if (fmt == "json")
                cfg.format = OutputFormat::Json;
            else
                throw ConfigError("config field 'output.format' must be \"csv\" or \"json\"");
        }
    }

    if (const json* sweep = find(j, "sweep")) {
        if (!sweep->is_object()) throw ConfigError("config field 'sweep' must be an object");
        SweepSpec s;
        const json* param = find(*sweep, "param");
        if (!param || !param->is_string() ||
            (param->get<std::string>() != "alpha" && param->get<std::string>() != "c"))
            throw ConfigError("config field 'sweep.param' must be \"alpha\" or \"c\"");
        s.param = param->get<std::string>();
        const json* values = find(*sweep, "values");
        if (!values || !values->is_array())
            throw ConfigError("config field 'sweep.values' must be an array of numbers");
        for (const json& v : *values) {
            if (!v.is_number()) throw ConfigError("config field 'sweep.values' must be numeric");
            s.values.push_back(v.get<double>());
        }
        cfg.sweep = std::move(s);
    }

    // Eager validation: every model/state/unitary invariant before any compute.
    build_trajectory(cfg, 0);
    return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json j;
    j["model"] = {{"nu", cfg.nu}, {"g", cfg.g}, {"kappa", cfg.kappa},
                  {"n_bath", cfg.n_bath}, {"x", cfg.x}};
    if (cfg.initial.mode == "amplitudes")
        j["initial"] = {{"mode", "amplitudes"}, {"A_re", cfg.initial.a_re},
                        {"A_im", cfg.initial.a_im}, {"B_re", cfg.initial.b_re},
                        {"B_im", cfg.initial.b_im}};
    else
        j["initial"] = {{"mode", "alpha"}, {"alpha", cfg.initial.alpha},
                        {"phase1", cfg.initial.phase1}, {"phase2", cfg.initial.phase2}};
    if (cfg.unitary.mode == "matrix") {
        json entries = json::array();
        for (const auto& [re, im] : cfg.unitary.entries) entries.push_back({re, im});
        j["unitary"] = {{"mode", "matrix"}, {"entries", entries}};
    } else if (cfg.unitary.mode == "real_cd") {
        j["unitary"] = {{"mode", "real_cd"}, {"c", cfg.unitary.c}};
    } else {
        j["unitary"] = {{"mode", "random"}};
        if (cfg.unitary.seed) j["unitary"]["seed"] = *cfg.unitary.seed;
    }
    j["grid"] = {{"t_max", cfg.t_max}, {"samples", cfg.samples}};
    json output = {{"format", cfg.format == OutputFormat::Csv ? "csv" : "json"}};
    if (!cfg.out_path.empty()) output["path"] = cfg.out_path;
    j["output"] = output;
    if (cfg.sweep) j["sweep"] = {{"param", cfg.sweep->param}, {"values", cfg.sweep->values}};
    return j.dump(2);
}

Trajectory build_trajectory(const ScenarioConfig& cfg, std::uint64_t seed) {
    ModelParams params = [&] {
        try {
            return ModelParams::physical(cfg.nu, cfg.g, cfg.kappa, cfg.n_bath, cfg.x);
        } catch (const InvalidRegime& e) {
            throw ConfigError(std::string("config field 'model': ") + e.what());
        }
    }();

    StateH1 state = [&] {
        try {
            if (cfg.initial.mode == "alpha")
                return StateH1::from_alpha(cfg.initial.alpha, cfg.initial.phase1,
                                           cfg.initial.phase2, params);
            return StateH1::normalized(cplx(cfg.initial.a_re, cfg.initial.a_im),
                                       cplx(cfg.initial.b_re, cfg.initial.b_im), params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config field 'initial': ") + e.what());
        }
    }();

    Unitary2 w = [&] {
        try {
            if (cfg.unitary.mode == "matrix") {
                const auto& e = cfg.unitary.entries;
                return Unitary2(cplx(e[0].first, e[0].second), cplx(e[1].first, e[1].second),
                                cplx(e[2].first, e[2].second), cplx(e[3].first, e[3].second));
            }
            if (cfg.unitary.mode == "real_cd") return Unitary2::from_real_c(cfg.unitary.c);
            return random_unitary2(cfg.unitary.seed.value_or(seed));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config field 'unitary': ") + e.what());
        }
    }();

    return {std::move(params), state, w};
}

double effective_t_max(const ScenarioConfig& cfg) {
    if (cfg.t_max > 0.0) return cfg.t_max;
    const ModelParams p = ModelParams::physical(cfg.nu, cfg.g, cfg.kappa, cfg.n_bath, cfg.x);
    return 2.0 * std::numbers::pi / p.omega;
}

std::vector<CurveRecord> compute_curve(const Trajectory& traj, double t_max,
                                       std::size_t samples) {
    std::vector<CurveRecord> rows;
    rows.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(samples);
        const double p = population_p(traj, t);
        const double q = population_q(traj, t);
        rows.push_back({t, p, q, entropy(p), entropy(q)});
    }
    return rows;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

constexpr const char* kCsvHeader = "t,p,q,entropy_H,entropy_hW\n";

void append_rows(std::string& out, const std::vector<CurveRecord>& rows) {
    out += kCsvHeader;
    for (const CurveRecord& r : rows) {
        out += fmt17(r.t);
        out += ',';
        out += fmt17(r.p);
        out += ',';
        out += fmt17(r.q);
        out += ',';
        out += fmt17(r.entropy_h);
        out += ',';
        out += fmt17(r.entropy_hw);
        out += '\n';
    }
}

json rows_to_json(const std::vector<CurveRecord>& rows) {
    json a = json::array();
    for (const CurveRecord& r : rows)
        a.push_back({r.t, r.p, r.q, r.entropy_h, r.entropy_hw});
    return a;
}

const json kColumns = {"t", "p", "q", "entropy_H", "entropy_hW"};

}  // namespace

std::string curve_to_csv(const std::vector<CurveRecord>& rows) {
    std::string out;
    append_rows(out, rows);
    return out;
}

std::string curve_to_json(const ScenarioConfig& cfg, const std::vector<CurveRecord>& rows) {
    json j;
    j["meta"] = json::parse(serialize_config(cfg));
    j["columns"] = kColumns;
    j["rows"] = rows_to_json(rows);
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepBlock>& blocks) {
    std::string out;
    for (const SweepBlock& b : blocks) {
        out += "# sweep ";
        out += b.param;
        out += '=';
        out += fmt17(b.value);
        out += '\n';
        append_rows(out, b.rows);
    }
    return out;
}

std::string sweep_to_json(const ScenarioConfig& cfg, const std::vector<SweepBlock>& blocks) {
    json j;
    j["meta"] = json::parse(serialize_config(cfg));
    j["columns"] = kColumns;
    json arr = json::array();
    for (const SweepBlock& b : blocks)
        arr.push_back({{"param", b.param}, {"value", b.value}, {"rows", rows_to_json(b.rows)}});
    j["blocks"] = arr;
    return j.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& payload, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        fallback << payload;
        if (!fallback) throw IoError("failed writing to output stream");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << payload;
    if (!f) throw IoError("failed writing output file: " + path);
}

}  // namespace quasih
