#include <cmath>
#include <fstream>

#include <json.hpp>

#include "commands.hpp"
#include "sgl/error.hpp"
#include "sgl/io/io.hpp"
#include "sgl/sde/sde.hpp"

namespace cli {

namespace {

using namespace sgl;
using namespace sgl::sde;

SdeParams params_from(const Args& args) {
    SdeParams p;
    p.gamma = args.get_real("gamma");
    p.tau = args.get_real("tau");
    p.sigma = args.get_real("sigma");
    p.dt = args.get_real("dt");
    p.t_end = args.get_real("t-end");
    const std::string alpha = args.get("alpha");
    if (alpha == "dynamic") {
        p.alpha_fixed = false;
        p.alpha0 = args.get_real("alpha0");
    } else if (alpha.rfind("fixed:", 0) == 0) {
        p.alpha_fixed = true;
        p.alpha0 = std::stod(alpha.substr(6));
    } else {
        fail_pre("ParamError", "alpha must be 'dynamic' or 'fixed:<v>', got '" + alpha + "'");
    }
    const auto w0 = args.get_grid("w0");
    require(w0.size() == 2, "ParamError", "--w0 needs two comma-separated values");
    p.w0 = {w0[0], w0[1]};
    p.freeze_w = args.get_bool("freeze-w");
    p.seed = static_cast<std::uint64_t>(args.get_int("seed"));
    p.sample_every = args.get_int("sample-every");
    return p;
}

std::vector<FlagSpec> sde_flags() {
    return {{"gamma", "0.5", "coupling in (0,1)", false},
            {"tau", "0.3", "data-noise decay rate", false},
            {"sigma", "0.0", "optimization-noise scale", false},
            {"alpha", "dynamic", "dynamic or fixed:<value>", false},
            {"alpha0", "0.5", "initial core proportion", false},
            {"w0", "0.02,0.4", "initial intensities w1,w2", false},
            {"dt", "0.005", "step size", false},
            {"t-end", "46.0", "horizon", false},
            {"freeze-w", "0", "hold w at w0", false},
            {"sample-every", "10", "trajectory thinning", false},
            {"seed", "0", "64-bit seed", false}};
}

int run_path(const Args& args) {
    const SdeParams p = params_from(args);
    const auto tr = integrate(p);
    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"t", "w1", "w2", "alpha"});
    for (const auto& s : tr.samples) csv.row({s.t, s.w1, s.w2, s.alpha});

    nlohmann::ordered_json j;
    j["final"] = {{"t", tr.final.t},
                  {"w1", tr.final.w1},
                  {"w2", tr.final.w2},
                  {"alpha", tr.final.alpha},
                  {"k0", tr.final.k0},
                  {"k1", tr.final.k1}};
    j["gap"] = tr.final.w2 - tr.final.w1;
    j["sigma_condition_held"] = tr.sigma_condition_held;
    j["w_left_range"] = tr.w_left_range;
    if (p.alpha_fixed && p.sigma == 0.0 && p.alpha0 > 0.0 && p.alpha0 < 1.0) {
        const auto cf = ode_closed_form(p);
        const auto w = cf.at(p.t_end);
        j["closed_form_endpoint"] = {{"w1", w[0]}, {"w2", w[1]}};
        const auto tc = tau_c(p);
        if (tc.has_value()) j["tau_c"] = *tc;
    }
    std::ofstream f(out + ".summary.json");
    require(f.good(), "ParamError", "cannot open " + out + ".summary.json");
    f << j.dump(2) << "\n";
    io::write_manifest(out, "sde run", args.resolved());
    if (tr.w_left_range)
        std::fputs("warning: w left [0, 1.5] during the run\n", stderr);
    return 0;
}

int run_sweep(const Args& args) {
    SdeParams base = params_from(args);
    const auto taus = args.get_grid("tau-grid");
    const auto sigmas = args.get_grid("sigma-grid");
    const int replicas = static_cast<int>(args.get_int("replicas"));
    const auto cells = gap_sweep(base, taus, sigmas, replicas);

    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"tau", "sigma", "gap_mean", "gap_stderr", "cond_tau", "cond_sigma"});
    for (const auto& c : cells)
        csv.row({c.tau, c.sigma, c.gap_mean, c.gap_stderr, c.cond_tau ? 1.0 : 0.0,
                 c.cond_sigma ? 1.0 : 0.0});
    io::write_manifest(out, "sde sweep", args.resolved());
    return 0;
}

int run_density(const Args& args) {
    SdeParams p = params_from(args);
    const int grid = static_cast<int>(args.get_int("grid"));
    const auto dens = fp_density(p.w0, p, grid);
    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"alpha", "p"});
    for (int i = 0; i < grid; ++i)
        csv.row({static_cast<double>(i) / (grid - 1), dens[static_cast<std::size_t>(i)]});
    io::write_manifest(out, "sde density", args.resolved());
    return 0;
}

} // namespace

int cmd_sde(const std::vector<std::string>& argv) {
    require(!argv.empty(), "ParamError", "sde needs an action: run|sweep|density");
    const std::string action = argv[0];
    const std::vector<std::string> rest(argv.begin() + 1, argv.end());

    auto flags = sde_flags();
    if (action == "run") {
        flags.push_back({"out", "sde_run.csv", "trajectory output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_path(args);
    }
    if (action == "sweep") {
        flags.push_back({"tau-grid", "0.3,0.8", "comma-separated tau values", false});
        flags.push_back({"sigma-grid", "0.1,0.2,0.4", "comma-separated sigma values", false});
        flags.push_back({"replicas", "32", "replicas per cell", false});
        flags.push_back({"out", "sde_sweep.csv", "sweep output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_sweep(args);
    }
    if (action == "density") {
        flags.push_back({"grid", "257", "density grid size", false});
        flags.push_back({"out", "density.csv", "density output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_density(args);
    }
    fail_pre("ParamError", "unknown sde action '" + action + "'");
}

} // namespace cli
