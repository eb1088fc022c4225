#include "args.hpp"

#include <fstream>
#include <sstream>

#include "sgl/error.hpp"

namespace cli {

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    sgl::require(in.good(), "ParseError", "cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);
        const std::size_t eq = line.find('=');
        sgl::require(eq != std::string::npos && eq > 0, "ParseError",
                     "config parse error at line " + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            const std::size_t x = s.find_first_not_of(" \t");
            const std::size_t y = s.find_last_not_of(" \t");
            s = x == std::string::npos ? "" : s.substr(x, y - x + 1);
        };
        strip(key);
        strip(val);
        sgl::require(!key.empty(), "ParseError",
                     "config parse error at line " + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        sgl::require(!field.empty(), "ParamError", "empty grid entry in '" + csv + "'");
        try {
            out.push_back(std::stod(field));
        } catch (...) {
            sgl::fail_pre("ParamError", "bad numeric grid entry '" + field + "'");
        }
    }
    sgl::require(!out.empty(), "ParamError", "empty grid");
    return out;
}

Args::Args(std::vector<FlagSpec> specs, const std::vector<std::string>& argv) {
    for (const auto& s : specs) values_[s.name] = s.def;

    auto known = [&](const std::string& key) {
        for (const auto& s : specs)
            if (s.name == key) return true;
        return false;
    };

    // pass 1: config file values
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i] == "--config") {
            sgl::require(i + 1 < argv.size(), "ParamError", "--config needs a path");
            for (const auto& [k, v] : load_config(argv[i + 1])) {
                sgl::require(known(k), "ParseError", "unknown config key '" + k + "'");
                values_[k] = v;
                given_[k] = true;
            }
        }
    }
    // pass 2: command-line flags override
    for (std::size_t i = 0; i < argv.size(); ++i) {
        const std::string& arg = argv[i];
        if (arg == "--config") {
            ++i;
            continue;
        }
        sgl::require(arg.size() > 2 && arg.rfind("--", 0) == 0, "ParamError",
                     "unexpected argument '" + arg + "'");
        const std::string key = arg.substr(2);
        sgl::require(known(key), "ParamError", "unknown flag --" + key);
        sgl::require(i + 1 < argv.size(), "ParamError", "--" + key + " needs a value");
        values_[key] = argv[++i];
        given_[key] = true;
    }

    for (const auto& s : specs)
        if (s.required && values_[s.name].empty())
            sgl::fail_pre("ParamError", "missing required flag --" + s.name);
}

const std::string& Args::get(const std::string& name) const {
    const auto it = values_.find(name);
    sgl::check_invariant(it != values_.end(), "flag '" + name + "' not declared");
    return it->second;
}

double Args::get_real(const std::string& name) const {
    try {
        return std::stod(get(name));
    } catch (...) {
        sgl::fail_pre("ParamError", "flag --" + name + " needs a real value, got '" + get(name) + "'");
    }
}

long Args::get_int(const std::string& name) const {
    try {
        return std::stol(get(name));
    } catch (...) {
        sgl::fail_pre("ParamError",
                      "flag --" + name + " needs an integer value, got '" + get(name) + "'");
    }
}

bool Args::get_bool(const std::string& name) const {
    const std::string& v = get(name);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no" || v.empty()) return false;
    sgl::fail_pre("ParamError", "flag --" + name + " needs a boolean, got '" + v + "'");
}

bool Args::provided(const std::string& name) const {
    const auto it = given_.find(name);
    return it != given_.end() && it->second;
}

std::vector<double> Args::get_grid(const std::string& name) const {
    return parse_grid(get(name));
}

std::string Args::usage(const std::string& cmd, const std::vector<FlagSpec>& specs) {
    std::string out = "usage: sgl " + cmd + " [--config FILE]";
    for (const auto& s : specs) out += " [--" + s.name + " V]";
    out += "\n";
    for (const auto& s : specs) {
        out += "  --" + s.name;
        if (!s.def.empty()) out += " (default " + s.def + ")";
        if (s.required) out += " (required)";
        out += "  " + s.help + "\n";
    }
    return out;
}

} // namespace cli
