#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlrd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidGridError : Error {
    using Error::Error;
};

struct SamplingError : Error {
    using Error::Error;
};

// Non-finite argument or function value in a coefficient evaluation.
struct EvaluationError : Error {
    using Error::Error;
};

// Asserted model bound violated at runtime (e.g. a(xi) < m).
struct ModelError : Error {
    using Error::Error;
};

struct SingularSystemError : Error {
    SingularSystemError(std::size_t index, const std::string& what)
        : Error(what), pivot_index(index) {}
    std::size_t pivot_index;
};

// Non-finite scheme coefficient or nodal value.
struct BlowUpError : Error {
    using Error::Error;
};

// Raised by simulate(): wraps the underlying failure with step index and time.
struct SimulationError : Error {
    SimulationError(int step_, double time_, const std::string& what)
        : Error("step " + std::to_string(step_) + " (t=" + std::to_string(time_) +
                "): " + what),
          step(step_), time(time_) {}
    int step;
    double time;
};

struct ConfigError : Error {
    using Error::Error;
};

struct FitDomainError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace nlrd
