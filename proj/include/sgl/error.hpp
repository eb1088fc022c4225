#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sgl {

// Contract violation at a module boundary (bad flags, degenerate inputs,
// unsatisfied preconditions). The CLI maps these to exit code 1. `code` is
// the stable machine-readable name, e.g. "EmptyConflictSet".
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Broken internal invariant. Exit code 2.
class InternalError : public std::logic_error {
    using std::logic_error::logic_error;
};

[[noreturn]] inline void fail_pre(const std::string& code, const std::string& msg) {
    throw PreconditionError(code, msg);
}

inline void require(bool ok, const std::string& code, const std::string& msg) {
    if (!ok) fail_pre(code, msg);
}

inline void check_invariant(bool ok, const std::string& msg) {
    if (!ok) throw InternalError("invariant violated: " + msg);
}

} // namespace sgl
