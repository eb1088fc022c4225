#pragma once

#include <string>
#include <vector>

#include "args.hpp"

namespace cli {

// Output paths resolve against --out-dir, then SGL_OUT_DIR, then cwd.
std::string resolve_out(const Args& args, const std::string& name);

int cmd_egt(const std::vector<std::string>& argv);
int cmd_sde(const std::vector<std::string>& argv);
int cmd_kernel(const std::vector<std::string>& argv);
int cmd_nnlab(const std::vector<std::string>& argv);
int cmd_feature(const std::vector<std::string>& argv);
int cmd_verify(const std::vector<std::string>& argv);

// shared flag tails
inline std::vector<FlagSpec> with_common(std::vector<FlagSpec> specs) {
    specs.push_back({"out-dir", "", "output directory (or SGL_OUT_DIR)", false});
    specs.push_back({"threads", "0", "cap worker threads (0 = hardware)", false});
    return specs;
}

void apply_common(const Args& args);

} // namespace cli
