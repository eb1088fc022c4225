#include <cstdlib>

#include "commands.hpp"
#include "sgl/parallel.hpp"

namespace cli {

std::string resolve_out(const Args& args, const std::string& name) {
    std::string dir = args.get("out-dir");
    if (dir.empty()) {
        if (const char* env = std::getenv("SGL_OUT_DIR")) dir = env;
    }
    if (dir.empty() || name.find('/') != std::string::npos) return name;
    if (dir.back() != '/') dir += '/';
    return dir + name;
}

void apply_common(const Args& args) {
    sgl::set_max_threads(static_cast<int>(args.get_int("threads")));
}

} // namespace cli
