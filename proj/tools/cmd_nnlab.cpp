#include <fstream>

#include <json.hpp>

#include "commands.hpp"
#include "sgl/error.hpp"
#include "sgl/io/io.hpp"
#include "sgl/nn/dataset.hpp"
#include "sgl/nn/mlp.hpp"
#include "sgl/nn/probe.hpp"
#include "sgl/nn/train.hpp"

namespace cli {

namespace {

using namespace sgl;
using namespace sgl::nn;

std::vector<FlagSpec> data_flags() {
    return {{"n", "2048", "training samples", false},
            {"rho-sc", "0.9", "spurious-correlation strength in (0.5, 1]", false},
            {"noise-std", "0.1", "input Gaussian noise", false},
            {"sep-core", "1.0", "core block separation", false},
            {"sep-shortcut", "2.0", "shortcut block separation", false},
            {"seed", "1", "64-bit seed", false}};
}

SyntheticDatasetConfig dataset_from(const Args& args) {
    SyntheticDatasetConfig cfg;
    cfg.n_samples = args.get_int("n");
    cfg.rho_sc = args.get_real("rho-sc");
    cfg.noise_std = args.get_real("noise-std");
    cfg.sep_core = args.get_real("sep-core");
    cfg.sep_shortcut = args.get_real("sep-shortcut");
    cfg.seed = static_cast<std::uint64_t>(args.get_int("seed"));
    return cfg;
}

TrainConfig train_from(const Args& args) {
    TrainConfig tc;
    const std::string batch = args.get("batch");
    if (batch == "full") {
        tc.full_batch = true;
    } else {
        tc.full_batch = false;
        try {
            tc.batch = std::stol(batch);
        } catch (...) {
            fail_pre("ParamError", "--batch must be 'full' or an integer, got '" + batch + "'");
        }
    }
    tc.lr = args.get_real("lr");
    tc.epochs = static_cast<int>(args.get_int("epochs"));
    tc.seed = static_cast<std::uint64_t>(args.get_int("seed"));
    return tc;
}

void write_dataset_csv(const std::string& out, const SyntheticDataset& ds) {
    std::vector<std::string> header{"id", "label", "v_core", "v_shortcut", "v_noise"};
    for (std::size_t j = 0; j < ds.x.cols; ++j) header.push_back("x" + std::to_string(j));
    io::CsvWriter csv(out, header);
    for (std::size_t i = 0; i < ds.x.rows; ++i) {
        std::vector<std::string> row{std::to_string(i), std::to_string(ds.labels[i]),
                                     std::to_string(ds.v_core[i]), std::to_string(ds.v_shortcut[i]),
                                     std::to_string(ds.v_noise[i])};
        for (std::size_t j = 0; j < ds.x.cols; ++j) row.push_back(io::format_double(ds.x(i, j)));
        csv.row_mixed(row);
    }
}

int run_gen(const Args& args) {
    const auto ds = gen_dataset(dataset_from(args));
    const std::string out = resolve_out(args, args.get("out"));
    write_dataset_csv(out, ds);
    const auto shares = variance_decomposition(ds);
    nlohmann::ordered_json j;
    j["conflict_fraction"] = static_cast<double>(ds.conflict_count()) / ds.x.rows;
    j["variance_shares"] = {{"color", shares.color_share},
                            {"digit", shares.digit_share},
                            {"interaction", shares.interaction_share},
                            {"residual", shares.residual_share}};
    std::ofstream f(out + ".summary.json");
    require(f.good(), "ParamError", "cannot open " + out + ".summary.json");
    f << j.dump(2) << "\n";
    io::write_manifest(out, "nnlab gen", args.resolved());
    return 0;
}

int run_train(const Args& args) {
    const auto dc = dataset_from(args);
    const auto ds = gen_dataset(dc);
    const auto probe_set = gen_balanced_probe(dc, args.get_int("probe-per-combo"));
    MlpModel model = init_mlp({{48, 64, 32, 1}, dc.seed ^ 0xfeedULL});
    const auto log = train(model, ds, probe_set, train_from(args));

    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"epoch", "loss", "acc", "bias", "score_core", "score_shortcut",
                            "score_noise"});
    for (const auto& e : log.epochs)
        csv.row({static_cast<double>(e.epoch), e.loss, e.acc, e.conflict_bias, e.score_core,
                 e.score_shortcut, e.score_noise});
    io::write_manifest(out, "nnlab train", args.resolved());
    return 0;
}

int run_pca(const Args& args) {
    const auto dc = dataset_from(args);
    const auto ds = gen_dataset(dc);
    const auto probe_set = gen_balanced_probe(dc, args.get_int("probe-per-combo"));
    MlpModel model = init_mlp({{48, 64, 32, 1}, dc.seed ^ 0xfeedULL});
    if (args.get_int("epochs") > 0) (void)train(model, ds, probe_set, train_from(args));

    const long cap = args.get_int("cap");
    SyntheticDataset view = ds;
    if (cap > 0 && static_cast<long>(view.x.rows) > cap) {
        SyntheticDataset trimmed;
        trimmed.cfg = view.cfg;
        trimmed.x = la::Matrix(static_cast<std::size_t>(cap), view.x.cols);
        for (long i = 0; i < cap; ++i) {
            for (std::size_t j = 0; j < view.x.cols; ++j)
                trimmed.x(static_cast<std::size_t>(i), j) = view.x(static_cast<std::size_t>(i), j);
            trimmed.labels.push_back(view.labels[static_cast<std::size_t>(i)]);
            trimmed.v_core.push_back(view.v_core[static_cast<std::size_t>(i)]);
            trimmed.v_shortcut.push_back(view.v_shortcut[static_cast<std::size_t>(i)]);
            trimmed.v_noise.push_back(view.v_noise[static_cast<std::size_t>(i)]);
            trimmed.conflict.push_back(view.conflict[static_cast<std::size_t>(i)]);
        }
        view = std::move(trimmed);
    }
    const auto coords = tangent_pca(model, view, 2);
    const std::string out = resolve_out(args, args.get("out"));
    io::CsvWriter csv(out, {"id", "pc1", "pc2", "v_core", "v_shortcut"});
    for (std::size_t i = 0; i < coords.rows; ++i)
        csv.row({static_cast<double>(i), coords(i, 0), coords(i, 1),
                 static_cast<double>(view.v_core[i]), static_cast<double>(view.v_shortcut[i])});
    io::write_manifest(out, "nnlab pca", args.resolved());
    return 0;
}

int run_probe(const Args& args) {
    const auto dc = dataset_from(args);
    const auto ds = gen_dataset(dc);
    const auto probe_set = gen_balanced_probe(dc, args.get_int("probe-per-combo"));
    MlpModel model = init_mlp({{48, 64, 32, 1}, dc.seed ^ 0xfeedULL});
    (void)train(model, ds, probe_set, train_from(args));

    const std::string target_name = args.get("target");
    ProbeTarget target;
    if (target_name == "core") target = ProbeTarget::CoreTask;
    else if (target_name == "shortcut") target = ProbeTarget::ShortcutTask;
    else fail_pre("ParamError", "target must be core|shortcut, got '" + target_name + "'");
    const auto rep = l1_probe(model, probe_set, target, args.get_real("l1"));

    nlohmann::ordered_json j;
    j["target"] = target_name;
    j["l1_weight"] = rep.l1_weight;
    j["active_neurons"] = rep.active_neurons;
    j["weights"] = rep.weights;
    j["intercept"] = rep.intercept;
    const std::string out = resolve_out(args, args.get("out"));
    std::ofstream f(out);
    require(f.good(), "ParamError", "cannot open " + out);
    f << j.dump(2) << "\n";
    io::write_manifest(out, "nnlab probe", args.resolved());
    return 0;
}

} // namespace

int cmd_nnlab(const std::vector<std::string>& argv) {
    require(!argv.empty(), "ParamError", "nnlab needs an action: gen|train|pca|probe");
    const std::string action = argv[0];
    const std::vector<std::string> rest(argv.begin() + 1, argv.end());

    auto flags = data_flags();
    if (action == "gen") {
        flags.push_back({"out", "dataset.csv", "dataset output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_gen(args);
    }
    flags.push_back({"batch", "128", "batch size or 'full'", false});
    flags.push_back({"lr", "0.05", "learning rate", false});
    flags.push_back({"epochs", "30", "training epochs", false});
    flags.push_back({"probe-per-combo", "64", "balanced probe samples per combo", false});
    if (action == "train") {
        flags.push_back({"out", "metrics.csv", "per-epoch metrics output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_train(args);
    }
    if (action == "pca") {
        flags.push_back({"cap", "1024", "max samples projected", false});
        flags.push_back({"out", "pca.csv", "projection output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_pca(args);
    }
    if (action == "probe") {
        flags.push_back({"target", "core", "core|shortcut", false});
        flags.push_back({"l1", "0.15", "L1 penalty weight", false});
        flags.push_back({"out", "probe.json", "probe report output", false});
        const Args args(with_common(flags), rest);
        apply_common(args);
        return run_probe(args);
    }
    fail_pre("ParamError", "unknown nnlab action '" + action + "'");
}

} // namespace cli
