#pragma once

#include <stdexcept>
#include <string>

namespace mllg {

// Exit codes used by the CLI: 0 success, 2 config, 3 solver, 4 invariant.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
    SolverError(const std::string& what, long iterations_)
        : std::runtime_error(what), iterations(iterations_) {}
    long iterations = 0;
};

struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what, int step_ = -1)
        : std::runtime_error(what), step(step_) {}
    int step = -1;
};

}  // namespace mllg
