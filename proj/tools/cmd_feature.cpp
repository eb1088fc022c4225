#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "commands.hpp"
#include "sgl/error.hpp"
#include "sgl/feature/feature.hpp"
#include "sgl/io/io.hpp"

namespace cli {

namespace {

using namespace sgl;
using namespace sgl::feature;

// CSV layout: id, label, pred, then one column per named binary feature
struct Samples {
    LabeledPrediction lp;
    std::vector<FeatureAssignment> features;
};

Samples load_samples(const std::string& path) {
    const auto table = io::read_csv(path);
    require(table.header.size() >= 4, "ParseError",
            "expected columns: id,label,pred,<feature...> in " + path);
    require(table.header[0] == "id" && table.header[1] == "label" && table.header[2] == "pred",
            "ParseError", "header must start with id,label,pred in " + path);
    Samples s;
    for (std::size_t c = 3; c < table.header.size(); ++c)
        s.features.push_back({table.header[c], {}});
    std::size_t lineno = 1;
    for (const auto& row : table.rows) {
        ++lineno;
        require(row.size() == table.header.size(), "ParseError",
                "ragged row at line " + std::to_string(lineno) + " of " + path);
        try {
            s.lp.labels.push_back(std::stoi(row[1]));
            s.lp.preds.push_back(std::stoi(row[2]));
            for (std::size_t c = 3; c < row.size(); ++c)
                s.features[c - 3].values.push_back(std::stoi(row[c]));
        } catch (const std::exception&) {
            fail_pre("ParseError", "bad numeric value at line " + std::to_string(lineno));
        }
    }
    validate_labels(s.lp);
    return s;
}

const FeatureAssignment& find_feature(const Samples& s, const std::string& name) {
    for (const auto& f : s.features)
        if (f.name == name) return f;
    fail_pre("ParamError", "no feature column named '" + name + "'");
}

int run_bias(const Args& args) {
    const auto s = load_samples(args.get("in"));
    const auto& alpha = find_feature(s, args.get("alpha"));
    const auto& beta = find_feature(s, args.get("beta"));
    const auto rep = shortcut_bias(alpha, beta, s.lp);

    nlohmann::ordered_json j;
    j["alpha"] = alpha.name;
    j["beta"] = beta.name;
    j["s_alpha"] = rep.s_alpha;
    j["s_beta"] = rep.s_beta;
    j["shortcut_bias"] = rep.shortcut_bias;
    j["conflict_accuracy"] = rep.conflict_accuracy;
    j["conflict_count"] = rep.conflict_count;
    const std::string out = resolve_out(args, args.get("out"));
    std::ofstream f(out);
    require(f.good(), "ParamError", "cannot open " + out);
    f << j.dump(2) << "\n";
    io::write_manifest(out, "feature bias", args.resolved());
    return 0;
}

int run_equiv(const Args& args) {
    const auto s = load_samples(args.get("in"));
    const auto& alpha = find_feature(s, args.get("alpha"));
    const auto& beta = find_feature(s, args.get("beta"));
    const double diff = bias_equivalence_check(alpha, beta, s.lp, args.get_real("balance-tol"));
    nlohmann::ordered_json j;
    j["difference"] = diff;
    j["within_1e9"] = diff <= 1e-9;
    const std::string out = resolve_out(args, args.get("out"));
    std::ofstream f(out);
    require(f.good(), "ParamError", "cannot open " + out);
    f << j.dump(2) << "\n";
    io::write_manifest(out, "feature equiv", args.resolved());
    return 0;
}

int run_classify(const Args& args) {
    const auto s = load_samples(args.get("in"));
    const std::string name = args.get("feature");
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    if (name.empty()) {
        for (const auto& f : s.features)
            per[f.name] = feature_class_name(classify_feature(f, s.lp.labels));
    } else {
        const auto& f = find_feature(s, name);
        per[f.name] = feature_class_name(classify_feature(f, s.lp.labels));
    }
    for (const auto& [k, v] : per.items()) std::printf("%s: %s\n", k.c_str(), v.get<std::string>().c_str());
    if (!args.get("out").empty()) {
        const std::string out = resolve_out(args, args.get("out"));
        std::ofstream f(out);
        require(f.good(), "ParamError", "cannot open " + out);
        f << per.dump(2) << "\n";
        io::write_manifest(out, "feature classify", args.resolved());
    }
    return 0;
}

} // namespace

int cmd_feature(const std::vector<std::string>& argv) {
    require(!argv.empty(), "ParamError", "feature needs an action: bias|equiv|classify");
    const std::string action = argv[0];
    const std::vector<std::string> rest(argv.begin() + 1, argv.end());

    if (action == "bias") {
        const Args args(with_common({{"in", "", "samples CSV (id,label,pred,features...)", true},
                                     {"alpha", "", "candidate shortcut feature column", true},
                                     {"beta", "", "reference feature column", true},
                                     {"out", "bias.json", "report output", false}}),
                        rest);
        apply_common(args);
        return run_bias(args);
    }
    if (action == "equiv") {
        const Args args(with_common({{"in", "", "samples CSV (id,label,pred,features...)", true},
                                     {"alpha", "", "candidate shortcut feature column", true},
                                     {"beta", "", "reference feature column", true},
                                     {"balance-tol", "0.02", "balance tolerance", false},
                                     {"out", "equiv.json", "report output", false}}),
                        rest);
        apply_common(args);
        return run_equiv(args);
    }
    if (action == "classify") {
        const Args args(with_common({{"in", "", "samples CSV (id,label,pred,features...)", true},
                                     {"feature", "", "feature column (default: all)", false},
                                     {"out", "", "optional JSON output", false}}),
                        rest);
        apply_common(args);
        return run_classify(args);
    }
    sgl::fail_pre("ParamError", "unknown feature action '" + action + "'");
}

} // namespace cli
