#include <fstream>

#include <json.hpp>

#include "commands.hpp"
#include "sgl/egt/chain.hpp"
#include "sgl/egt/energy.hpp"
#include "sgl/egt/payoff.hpp"
#include "sgl/egt/stationary.hpp"
#include "sgl/egt/sweep.hpp"
#include "sgl/error.hpp"
#include "sgl/io/io.hpp"

namespace cli {

namespace {

using namespace sgl;
using namespace sgl::egt;

PayoffRule parse_rule(const std::string& mode) {
    if (mode == "gd") return PayoffRule::Gd;
    if (mode == "sgd-exact") return PayoffRule::SgdExact;
    if (mode == "sgd-sample") return PayoffRule::SgdSample;
    fail_pre("ParamError", "mode must be gd|sgd-exact|sgd-sample, got '" + mode + "'");
}

std::vector<FlagSpec> game_flags() {
    return {{"n", "50", "population size N", false},
            {"batch", "0", "batch size B (SGD modes)", false},
            {"gamma", "0.5", "coupling in (0,1)", false},
            {"w1", "0.0", "core training intensity", false},
            {"w2", "0.0", "shortcut training intensity", false},
            {"eps", "0.01", "mutation rate in (0, 0.5)", false},
            {"mode", "gd", "payoff rule: gd|sgd-exact|sgd-sample", false},
            {"seed", "0", "64-bit seed", false}};
}

ChainConfig chain_from(const Args& args) {
    ChainConfig cfg;
    cfg.n = args.get_int("n");
    cfg.batch = args.get_int("batch");
    cfg.eps = args.get_real("eps");
    cfg.rule = parse_rule(args.get("mode"));
    cfg.seed = static_cast<std::uint64_t>(args.get_int("seed"));
    return cfg;
}

nlohmann::ordered_json summary_json(const PayoffMatrix& pm, const ChainConfig& cfg) {
    nlohmann::ordered_json j;
    j["payoff"] = {{"a", pm.a}, {"b", pm.b}, {"c", pm.c}, {"d", pm.d}};
    const long batch = cfg.rule == PayoffRule::Gd ? 0 : cfg.batch;
    try {
        const auto t = thresholds(pm, cfg.n, batch);
        j["z_star"] = t.z_star;
        if (batch >= 1) {
            j["tau"] = t.tau;
            j["ceil_tau_b"] = t.ceil_tau_b;
            j["n_tilde"] = t.n_tilde;
            j["n_tilde_strict"] =
                static_cast<double>(t.ceil_tau_b) * (pm.a - pm.b) / (pm.a - pm.d);
        }
    } catch (const PreconditionError& e) {
        j["thresholds_error"] = e.code();
    }
    const std::string gd_note = check_gd_conditions(pm, cfg.n, 0.5);
    const std::string sgd_note =
        cfg.batch >= 1 ? check_sgd_conditions(pm, cfg.n, cfg.batch) : "batch unset";
    j["conditions"] = {{"full_batch_ok", gd_note.empty()},
                       {"full_batch_note", gd_note},
                       {"mini_batch_ok", sgd_note.empty()},
                       {"mini_batch_note", sgd_note}};
    return j;
}

void write_summary(const std::string& out, const PayoffMatrix& pm, const ChainConfig& cfg,
                   nlohmann::ordered_json extra) {
    nlohmann::ordered_json j = summary_json(pm, cfg);
    if (extra.is_object()) j.update(extra);
    std::ofstream f(out + ".summary.json");
    require(f.good(), "ParamError", "cannot open " + out + ".summary.json");
    f << j.dump(2) << "\n";
}

int run_simulate(const Args& args) {
    const auto cfg = chain_from(args);
    const auto pm = payoff_matrix(args.get_real("gamma"), args.get_real("w1"), args.get_real("w2"));
    validate_chain_config(cfg);
    const long steps = args.get_int("steps");
    long z = args.get_int("z0");
    if (z < 0) z = cfg.n / 2;
    require(z <= cfg.n, "ParamError", "z0 outside [0, N]");

    MoveLaw law;
    if (cfg.rule != PayoffRule::SgdSample) law = selection_law(cfg, pm);
    rng::Engine eng(cfg.seed, 1);

    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"t", "z"});
    csv.row({0.0, static_cast<double>(z)});
    for (long t = 1; t <= steps; ++t) {
        if (cfg.rule == PayoffRule::SgdSample) {
            const auto pay = pi_sgd(z, pm, cfg.n, cfg.batch, SgdPayoffMode::Sample, &eng);
            z = darwinian_step(z, pay.pi_a, pay.pi_b, cfg.eps, cfg.n, eng);
        } else {
            z = step_from_law(z, law, cfg.eps, cfg.n, eng);
        }
        csv.row({static_cast<double>(t), static_cast<double>(z)});
    }
    write_summary(out, pm, cfg, {});
    io::write_manifest(out, "egt simulate", args.resolved());
    return 0;
}

int run_stationary(const Args& args) {
    const auto cfg = chain_from(args);
    const auto pm = payoff_matrix(args.get_real("gamma"), args.get_real("w1"), args.get_real("w2"));
    require(cfg.rule != PayoffRule::SgdSample, "ParamError",
            "stationary needs an exact rule (gd or sgd-exact)");
    StationaryMethod method = StationaryMethod::ExactSolve;
    const std::string m = args.get("method");
    if (m == "tree") method = StationaryMethod::TreeTheorem;
    else if (m == "mc") method = StationaryMethod::MonteCarlo;
    else require(m == "exact", "ParamError", "method must be exact|tree|mc");

    const auto p = transition_matrix(cfg, pm);
    const auto mu = stationary(p, method, cfg.seed, args.get_int("steps"));

    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"z", "prob"});
    for (std::size_t z = 0; z < mu.probs.size(); ++z)
        csv.row({static_cast<double>(z), mu.probs[z]});
    write_summary(out, pm, cfg,
                  {{"method", m}, {"residual", mu.residual}, {"occ0", mu.probs.front()},
                   {"occN", mu.probs.back()}});
    io::write_manifest(out, "egt stationary", args.resolved());
    return 0;
}

int run_energy(const Args& args) {
    const auto cfg = chain_from(args);
    const auto pm = payoff_matrix(args.get_real("gamma"), args.get_real("w1"), args.get_real("w2"));
    const auto rep = mutation_energy(cfg, pm);

    const std::string out = resolve_out(args, args.get("out"));
    nlohmann::ordered_json j;
    j["chi1"] = rep.chi1;
    j["chi2"] = rep.chi2;
    j["z_star"] = rep.z_star;
    j["eps_grid"] = rep.eps_grid;
    auto matrix_json = [](const la::Matrix& m) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < m.rows; ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t jx = 0; jx < m.cols; ++jx) row.push_back(m(i, jx));
            rows.push_back(row);
        }
        return rows;
    };
    j["edge_energy"] = matrix_json(rep.edge_energy);
    j["fitted_energy"] = matrix_json(rep.fitted_energy);
    std::ofstream f(out);
    require(f.good(), "ParamError", "cannot open " + out);
    f << j.dump(2) << "\n";
    io::write_manifest(out, "egt energy", args.resolved());
    return 0;
}

int run_sweep(const Args& args) {
    const auto cfg = chain_from(args);
    const auto pm = payoff_matrix(args.get_real("gamma"), args.get_real("w1"), args.get_real("w2"));
    SweepOptions opt;
    opt.horizon = args.get_int("horizon");
    opt.replicas = static_cast<int>(args.get_int("replicas"));
    opt.z0 = args.get_int("z0");
    opt.exact_occupancy = args.get_bool("exact");
    opt.beta = args.get_real("beta");
    const auto grid = args.get_grid("eps-grid");
    const auto res = sss_sweep(cfg, pm, grid, opt);

    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"eps", "occ0", "occN"});
    for (const auto& row : res.rows) csv.row({row.eps, row.occ0, row.occN});
    write_summary(out, pm, cfg, {{"condition_note", res.condition_note}});
    io::write_manifest(out, "egt sweep", args.resolved());
    return 0;
}

} // namespace

int cmd_egt(const std::vector<std::string>& argv) {
    require(!argv.empty(), "ParamError", "egt needs an action: simulate|stationary|energy|sweep");
    const std::string action = argv[0];
    const std::vector<std::string> rest(argv.begin() + 1, argv.end());

    auto flags = game_flags();
    if (action == "simulate") {
        flags.push_back({"steps", "10000", "chain steps", false});
        flags.push_back({"z0", "-1", "start state (-1 = N/2)", false});
        flags.push_back({"out", "trajectory.csv", "trajectory output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_simulate(args);
    }
    if (action == "stationary") {
        flags.push_back({"method", "exact", "exact|tree|mc", false});
        flags.push_back({"steps", "1000000", "Monte Carlo steps (method=mc)", false});
        flags.push_back({"out", "stationary.csv", "distribution output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_stationary(args);
    }
    if (action == "energy") {
        flags.push_back({"out", "energy.json", "energy report output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_energy(args);
    }
    if (action == "sweep") {
        flags.push_back({"eps-grid", "0.02,0.005,0.001", "comma-separated eps values", false});
        flags.push_back({"horizon", "0", "steps per replica (floor 10/eps)", false});
        flags.push_back({"replicas", "8", "Monte Carlo replicas", false});
        flags.push_back({"z0", "-1", "start state (-1 = N/2)", false});
        flags.push_back({"exact", "0", "use the exact stationary solve", false});
        flags.push_back({"beta", "0.5", "slack for the full-batch conditions", false});
        flags.push_back({"out", "sweep.csv", "sweep output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_sweep(args);
    }
    fail_pre("ParamError", "unknown egt action '" + action + "'");
}

} // namespace cli
