#pragma once

#include <stdexcept>
#include <string>

namespace critfluct {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Trainable variables left the guard band during SGD; carries the offending
// composition id and learning rate so suite logs identify the run.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& composition, double gamma, const std::string& msg)
        : std::runtime_error(msg), composition(composition), gamma(gamma) {}
    std::string composition;
    double gamma;
};

struct EstimationError : std::runtime_error {
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyHistogramError : std::runtime_error {
    explicit EmptyHistogramError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MultiBranchError : std::runtime_error {
    explicit MultiBranchError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace critfluct
