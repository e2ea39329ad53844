#include "quasih/cli_app.hpp"

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasih/analytics.hpp"
#include "quasih/config.hpp"
#include "quasih/dyson.hpp"
#include "quasih/verify.hpp"

namespace quasih {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 42;
    std::size_t samples = 0;
    bool bits = false;

    void attach(CLI::App* sub, bool with_grid = true) {
        sub->add_option("--config", config_path, "scenario JSON")->required();
        sub->add_option("--out", out_path, "output path (default: config, else stdout)");
        sub->add_option("--format", format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "seed for random unitaries");
        if (with_grid) {
            sub->add_option("--samples", samples, "grid samples override");
            sub->add_flag("--bits", bits, "report entropies in bits instead of nats");
        }
    }

    ScenarioConfig load() const {
        ScenarioConfig cfg = parse_config(slurp(config_path));
        if (!out_path.empty()) cfg.out_path = out_path;
        if (format == "csv") cfg.format = OutputFormat::Csv;
        if (format == "json") cfg.format = OutputFormat::Json;
        if (samples) cfg.samples = samples;
        return cfg;
    }
};

std::size_t sweep_threads() {
    if (const char* env = std::getenv("QUASIH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

void to_bits(std::vector<CurveRecord>& rows) {
    const double ln2 = std::numbers::ln2;
    for (CurveRecord& r : rows) {
        r.entropy_h /= ln2;
        r.entropy_hw /= ln2;
    }
}

int cmd_evolve(const CommonFlags& flags, std::ostream& out) {
    const ScenarioConfig cfg = flags.load();
    const Trajectory traj = build_trajectory(cfg, flags.seed);
    auto rows = compute_curve(traj, effective_t_max(cfg), cfg.samples);
    if (flags.bits) to_bits(rows);
    const std::string payload =
        cfg.format == OutputFormat::Csv ? curve_to_csv(rows) : curve_to_json(cfg, rows);
    write_output(cfg.out_path, payload, out);
    return 0;
}

int cmd_sweep(const CommonFlags& flags, std::ostream& out) {
    const ScenarioConfig cfg = flags.load();
    if (!cfg.sweep) throw ConfigError("sweep requires a 'sweep' object in the config");
    if (cfg.sweep->values.empty()) throw ConfigError("config field 'sweep.values' is empty");
    if (cfg.sweep->param == "alpha" && cfg.initial.mode != "alpha")
        throw ConfigError("sweeping 'alpha' requires initial.mode == \"alpha\"");
    if (cfg.sweep->param == "c" && cfg.unitary.mode != "real_cd")
        throw ConfigError("sweeping 'c' requires unitary.mode == \"real_cd\"");

    std::vector<SweepBlock> blocks(cfg.sweep->values.size());
    std::vector<ScenarioConfig> variants;
    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
        ScenarioConfig v = cfg;
        if (cfg.sweep->param == "alpha")
            v.initial.alpha = cfg.sweep->values[i];
        else
            v.unitary.c = cfg.sweep->values[i];
        build_trajectory(v, flags.seed);  // validate every block before computing
        variants.push_back(std::move(v));
    }

    const std::size_t cap = sweep_threads();
    std::size_t next = 0;
    while (next < variants.size()) {
        const std::size_t batch = std::min(cap, variants.size() - next);
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < batch; ++k) {
            const std::size_t i = next + k;
            pool.emplace_back([&, i] {
                const Trajectory traj = build_trajectory(variants[i], flags.seed);
                blocks[i] = {cfg.sweep->param, cfg.sweep->values[i],
                             compute_curve(traj, effective_t_max(variants[i]),
                                           variants[i].samples)};
                if (flags.bits) to_bits(blocks[i].rows);
            });
        }
        for (auto& th : pool) th.join();
        next += batch;
    }

    const std::string payload =
        cfg.format == OutputFormat::Csv ? sweep_to_csv(blocks) : sweep_to_json(cfg, blocks);
    write_output(cfg.out_path, payload, out);
    return 0;
}

json side_report(const Trajectory& traj, Side side, double horizon) {
    const DisentanglementReport rep = disentanglement_times(traj, side, horizon);
    json j;
    j["classification"] = rep.classification == EntanglementClass::AlwaysEntangled
                              ? "always_entangled"
                              : "periodic_touch";
    j["a_zero_times"] = rep.a_zero_times;
    j["b_zero_times"] = rep.b_zero_times;
    j["disentanglement_times"] = rep.all_times;
    return j;
}

int cmd_entanglement(const CommonFlags& flags, std::ostream& out) {
    const ScenarioConfig cfg = flags.load();
    const Trajectory traj = build_trajectory(cfg, flags.seed);
    const double horizon = 2.0 * std::numbers::pi / traj.params.omega;

    json j;
    j["meta"] = json::parse(serialize_config(cfg));
    j["non_hermitian"] = side_report(traj, Side::NonHermitian, horizon);
    j["hermitian"] = side_report(traj, Side::Hermitian, horizon);
    const AveragedState avg = averaged_state(traj);
    j["averaged_state"] = {{"q0", avg.q0}, {"z", {avg.z.real(), avg.z.imag()}}};
    j["concurrence"] = concurrence(avg);
    write_output(cfg.out_path, j.dump(2) + "\n", out);
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
    const auto results = run_verify(suite, seed);
    std::size_t failed = 0;
    json failures = json::array();
    double worst = 0.0;
    for (const InvariantResult& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << "  residual=" << fmt17(r.residual)
            << "  tol=" << fmt17(r.tolerance);
        if (!r.note.empty()) out << "  (" << r.note << ")";
        out << "\n";
        if (!r.pass) {
            ++failed;
            failures.push_back(r.name);
        }
        if (r.tolerance > 0.0) worst = std::max(worst, r.residual / r.tolerance);
    }
    json summary = {{"suite", suite},
                    {"seed", seed},
                    {"groups", results.size()},
                    {"passed", results.size() - failed},
                    {"failed", failed},
                    {"worst_residual_over_tolerance", worst},
                    {"failures", failures}};
    out << summary.dump() << "\n";
    return failed == 0 ? 0 : 1;
}

int cmd_dyson_demo(const std::string& choice, double t_end, std::ostream& out) {
    const ModelParams params = ModelParams::physical(1.0, 1.0, 0.6, 1, 1.0);
    double deviation = 0.0;
    double budget = tol_fd;
    const int grid = 25;

    if (choice == "h_zero") {
        const MetricFlow flow{CMat::identity(2), params};
        const UnitaryPath id = UnitaryPath::identity();
        for (int i = 0; i <= grid; ++i) {
            const double t = t_end * i / grid;
            deviation = std::max(deviation, h_of_t(flow, id, t).max_norm());
        }
    } else if (choice == "constant_A") {
        const CMat a0 = CMat::diag2(1.0, 2.0);
        const MetricFlow flow{CMat::identity(2), params};
        const UnitaryPath path = UnitaryPath::closed_form([a0](double t) { return expm(a0, t); });
        for (int i = 0; i <= grid; ++i) {
            const double t = t_end * i / grid;
            deviation = std::max(deviation, (h_of_t(flow, path, t) - a0).max_norm());
        }
    } else if (choice == "time_dep_A") {
        budget = 10.0 * tol_ode;
        const CMat a0 = CMat::mat2(1.0, cplx(0.3, 0.1), cplx(0.3, -0.1), 0.5);
        const CMat a1 = CMat::mat2(0.4, cplx(0.0, -0.2), cplx(0.0, 0.2), -0.3);
        auto gen = [&](double t) { return a0 + cplx(std::cos(t), 0.0) * a1; };
        const UnitaryPath path = solve_w_ode(gen, t_end, default_h_ode);
        for (int i = 0; i <= grid; ++i) {
            const double t = t_end * i / grid;
            deviation = std::max(deviation, (h_from_w(path, t) - gen(t)).max_norm());
        }
    } else {
        throw ConfigError("dyson-demo choice must be h_zero, constant_A or time_dep_A");
    }

    const bool pass = deviation <= budget;
    out << (pass ? "PASS " : "FAIL ") << "dyson-demo " << choice
        << "  max_deviation=" << fmt17(deviation) << "  budget=" << fmt17(budget) << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"quasih — bipartite quasi-Hermitian oscillator-bath simulator"};
    app.require_subcommand(1);

    CommonFlags evolve_flags, sweep_flags, ent_flags;
    CLI::App* evolve = app.add_subcommand("evolve", "write t,p,q,entropy curves");
    evolve_flags.attach(evolve);
    CLI::App* sweep = app.add_subcommand("sweep", "curves for each sweep value");
    sweep_flags.attach(sweep);
    CLI::App* ent = app.add_subcommand("entanglement", "disentanglement and concurrence report");
    ent_flags.attach(ent, false);

    std::string suite = "all";
    std::uint64_t verify_seed = 42;
    CLI::App* verify = app.add_subcommand("verify", "run the seeded invariant suites");
    verify->add_option("suite", suite, "all|linalg|model|dynamics|analytics|dyson")
        ->check(CLI::IsMember({"all", "linalg", "model", "dynamics", "analytics", "dyson"}));
    verify->add_option("--seed", verify_seed, "master seed");

    std::string demo_choice;
    double t_end = 3.0;
    CLI::App* demo = app.add_subcommand("dyson-demo", "time-dependent Dyson map demos");
    demo->add_option("choice", demo_choice, "h_zero|constant_A|time_dep_A")->required();
    demo->add_option("--t-end", t_end, "horizon")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.get_name() << ": " << e.what() << "\n";
        return 2;
    }

    try {
        if (evolve->parsed()) return cmd_evolve(evolve_flags, out);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, out);
        if (ent->parsed()) return cmd_entanglement(ent_flags, out);
        if (verify->parsed()) return cmd_verify(suite, verify_seed, out);
        if (demo->parsed()) return cmd_dyson_demo(demo_choice, t_end, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace quasih
