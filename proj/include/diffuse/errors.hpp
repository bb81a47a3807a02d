#pragma once

#include <stdexcept>
#include <string>

namespace diffuse {

// Invalid argument values (bad ranges, bad enum choices, bad config fields).
class ParamError : public std::invalid_argument {
public:
    explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Tensor shape / dimension mismatches.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Operations evaluated outside their numerical domain (e.g. division by
// sqrt(1 - alpha_bar) at t = 0).
class NumericalDomainError : public std::domain_error {
public:
    explicit NumericalDomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Statistics that are undefined for the given input (e.g. correlation of a
// zero-variance grid).
class UndefinedStatisticError : public std::domain_error {
public:
    explicit UndefinedStatisticError(const std::string& msg) : std::domain_error(msg) {}
};

// Training diverged; carries the step index where the loss became non-finite.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& msg, long step)
        : std::runtime_error(msg + " (step " + std::to_string(step) + ")"), step_index(step) {}
    long step_index;
};

}  // namespace diffuse
