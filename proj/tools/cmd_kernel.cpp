#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "commands.hpp"
#include "sgl/error.hpp"
#include "sgl/io/io.hpp"
#include "sgl/kernel/kernel.hpp"

namespace cli {

namespace {

using namespace sgl;
using namespace sgl::kernel;

int run_ntk(const Args& args) {
    const double value = ntk_zonal(args.get_real("u"), static_cast<int>(args.get_int("depth")));
    std::printf("%s\n", io::format_double(value).c_str());
    if (!args.get("out").empty()) {
        const std::string out = resolve_out(args, args.get("out"));
        io::CsvWriter csv(out, {"u", "depth", "value"});
        csv.row({args.get_real("u"), static_cast<double>(args.get_int("depth")), value});
        io::write_manifest(out, "kernel ntk", args.resolved());
    }
    return 0;
}

int run_gram(const Args& args) {
    const auto x = io::read_matrix_csv(args.get("in"));
    const la::Matrix k = args.get("kind") == "data" ? data_gram(x) : quad_gram(x);
    const std::string out = resolve_out(args, args.get("out"));
    io::write_matrix_csv(out, k);
    io::write_manifest(out, "kernel gram", args.resolved());
    return 0;
}

int run_dk(const Args& args) {
    const auto x = io::read_matrix_csv(args.get("in"));
    const auto rep = dk_bound_check(x, static_cast<int>(args.get_int("r")));
    nlohmann::ordered_json j;
    j["angle"] = rep.angle;
    j["bound"] = rep.bound;
    j["rho"] = rep.rho;
    j["gap"] = rep.gap;
    j["holds"] = rep.holds;
    const std::string out = resolve_out(args, args.get("out"));
    std::ofstream f(out);
    require(f.good(), "ParamError", "cannot open " + out);
    f << j.dump(2) << "\n";
    io::write_manifest(out, "kernel dk", args.resolved());
    return 0;
}

int run_spiked(const Args& args) {
    SpikedModelConfig cfg;
    cfg.n = static_cast<int>(args.get_int("n"));
    cfg.betas = args.get_grid("betas");
    cfg.r = static_cast<int>(cfg.betas.size());
    cfg.sigma = args.get_real("sigma");
    cfg.trials = static_cast<int>(args.get_int("trials"));
    cfg.seed = static_cast<std::uint64_t>(args.get_int("seed"));
    const auto res = spiked_experiment(cfg);

    nlohmann::ordered_json j;
    j["n"] = cfg.n;
    j["sigma"] = cfg.sigma;
    j["trials"] = cfg.trials;
    nlohmann::ordered_json spikes = nlohmann::ordered_json::array();
    for (const auto& s : res.spikes) {
        spikes.push_back({{"beta", s.beta},
                          {"mean_top_eig", s.mean_top_eig},
                          {"mean_overlap_sq", s.mean_overlap_sq},
                          {"predicted_eig", s.predicted_eig},
                          {"predicted_overlap_sq", s.predicted_overlap_sq},
                          {"above_threshold", s.above_threshold},
                          {"bulk_contained_fraction", s.bulk_contained_fraction}});
    }
    j["spikes"] = spikes;
    const std::string out = resolve_out(args, args.get("out"));
    std::ofstream f(out);
    require(f.good(), "ParamError", "cannot open " + out);
    f << j.dump(2) << "\n";
    io::write_manifest(out, "kernel spiked", args.resolved());

    if (!args.get("hist").empty()) {
        const int bins = static_cast<int>(args.get_int("hist-bins"));
        const auto vals = wigner_spectrum(cfg.n, cfg.sigma, cfg.seed ^ 0x1757);
        const double lo = vals.back(), hi = vals.front();
        const double width = (hi - lo) / bins;
        std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
        for (double v : vals) {
            int b = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
            if (b >= bins) b = bins - 1;
            counts[static_cast<std::size_t>(b)] += 1.0;
        }
        const std::string hist_out = resolve_out(args, args.get("hist"));
        io::CsvWriter csv(hist_out, {"bin_lo", "bin_hi", "count"});
        for (int b = 0; b < bins; ++b)
            csv.row({lo + b * width, lo + (b + 1) * width, counts[static_cast<std::size_t>(b)]});
    }
    return 0;
}

} // namespace

int cmd_kernel(const std::vector<std::string>& argv) {
    require(!argv.empty(), "ParamError", "kernel needs an action: ntk|gram|dk|spiked");
    const std::string action = argv[0];
    const std::vector<std::string> rest(argv.begin() + 1, argv.end());

    if (action == "ntk") {
        const Args args(with_common({{"u", "0.5", "zonal argument in [-1,1]", false},
                                     {"depth", "2", "network depth L >= 1", false},
                                     {"out", "", "optional CSV output", false}}),
                        rest);
        apply_common(args);
        return run_ntk(args);
    }
    if (action == "gram") {
        const Args args(with_common({{"in", "", "dense CSV data matrix (rows = samples)", true},
                                     {"kind", "quad", "quad|data", false},
                                     {"out", "gram.csv", "Gram matrix output", false}}),
                        rest);
        apply_common(args);
        return run_gram(args);
    }
    if (action == "dk") {
        const Args args(with_common({{"in", "", "dense CSV data matrix (rows = samples)", true},
                                     {"r", "1", "subspace rank", false},
                                     {"out", "dk.json", "report output", false}}),
                        rest);
        apply_common(args);
        return run_dk(args);
    }
    if (action == "spiked") {
        const Args args(with_common({{"n", "2000", "matrix size", false},
                                     {"betas", "2.0", "spike amplitudes, descending", false},
                                     {"sigma", "1.0", "noise scale", false},
                                     {"trials", "10", "independent trials", false},
                                     {"seed", "0", "64-bit seed", false},
                                     {"out", "spiked.json", "report output", false},
                                     {"hist", "", "optional eigenvalue histogram CSV", false},
                                     {"hist-bins", "64", "histogram bins", false}}),
                        rest);
        apply_common(args);
        return run_spiked(args);
    }
    sgl::fail_pre("ParamError", "unknown kernel action '" + action + "'");
}

} // namespace cli
