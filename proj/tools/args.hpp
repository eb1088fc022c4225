#pragma once

#include <map>
#include <string>
#include <vector>

namespace cli {

// One accepted flag: every subcommand declares its table up front. Unknown
// keys are rejected both on the command line and in config files.
struct FlagSpec {
    std::string name; // without the leading --
    std::string def;  // default value ("" means required when required=true)
    std::string help;
    bool required = false;
};

class Args {
public:
    Args(std::vector<FlagSpec> specs, const std::vector<std::string>& argv);

    const std::string& get(const std::string& name) const;
    double get_real(const std::string& name) const;
    long get_int(const std::string& name) const;
    bool get_bool(const std::string& name) const; // "1"/"true" vs "0"/"false"
    bool provided(const std::string& name) const;
    std::vector<double> get_grid(const std::string& name) const; // comma-separated reals

    // resolved key -> value map echoed into the run manifest
    const std::map<std::string, std::string>& resolved() const { return values_; }

    static std::string usage(const std::string& cmd, const std::vector<FlagSpec>& specs);

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> given_;
};

// Flat key=value config file; '#' starts a comment. Throws ParseError with
// the offending line number. Command-line flags override file values.
std::map<std::string, std::string> load_config(const std::string& path);

std::vector<double> parse_grid(const std::string& csv);

} // namespace cli
