#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnls {

// Base for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RepresentationError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ComputationError : Error { using Error::Error; };
struct ResourceError : Error { using Error::Error; };
struct SamplingError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

struct DivergenceError : Error {
    DivergenceError(const std::string& what, int iteration)
        : Error(what), iteration(iteration) {}
    int iteration;
};

struct InstabilityError : Error {
    InstabilityError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step(step) {}
    std::size_t step;
};

}  // namespace rnls
