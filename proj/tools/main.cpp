#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "commands.hpp"
#include "sgl/error.hpp"
#include "sgl/version.hpp"

namespace {

void print_usage() {
    std::fputs(
        "sgl - shortcut-learning dynamics laboratory\n"
        "\n"
        "usage: sgl <command> <action> [flags]\n"
        "\n"
        "commands:\n"
        "  egt      simulate | stationary | energy | sweep     finite-population dynamics\n"
        "  sde      run | sweep | density                      training-intensity diffusion\n"
        "  kernel   ntk | gram | dk | spiked                   spectral experiments\n"
        "  nnlab    gen | train | pca | probe                  synthetic network testbed\n"
        "  feature  bias | equiv | classify                    conflict-set metrics\n"
        "  verify                                              closed-form self-checks\n"
        "\n"
        "global flags: --config FILE (key=value, overridden by flags),\n"
        "              --out-dir DIR (or SGL_OUT_DIR), --threads N\n",
        stderr);
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        print_usage();
        return args.empty() ? 1 : 0;
    }
    if (args[0] == "--version") {
        std::printf("sgl %s\n", sgl::kVersion);
        return 0;
    }

    const std::string cmd = args[0];
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        if (cmd == "egt") return cli::cmd_egt(rest);
        if (cmd == "sde") return cli::cmd_sde(rest);
        if (cmd == "kernel") return cli::cmd_kernel(rest);
        if (cmd == "nnlab") return cli::cmd_nnlab(rest);
        if (cmd == "feature") return cli::cmd_feature(rest);
        if (cmd == "verify") return cli::cmd_verify(rest);
        std::fprintf(stderr, "unknown command '%s'\n\n", cmd.c_str());
        print_usage();
        return 1;
    } catch (const sgl::PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const sgl::InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
