#ifndef VOLTRISK_ERRORS_HPP_
#define VOLTRISK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace voltrisk {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed files, dimension mismatches, out-of-range
// parameters. CLI exit code 2.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Network graph is not a radial feeder rooted at the slack bus.
class TopologyError : public InputError {
public:
    explicit TopologyError(const std::string& msg) : InputError(msg) {}
};

// Not enough historical records to fit or predict.
class InsufficientDataError : public InputError {
public:
    explicit InsufficientDataError(const std::string& msg) : InputError(msg) {}
};

// Numeric breakdown: non-convergence, condition blow-up. CLI exit code 4.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Conditioning point is so far in the tail that every component weight
// underflows.
class DegenerateConditioningError : public NumericError {
public:
    explicit DegenerateConditioningError(const std::string& msg) : NumericError(msg) {}
};

// Optimization problem has no feasible point. CLI exit code 3.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

// Optimization problem is unbounded below.
class UnboundedError : public Error {
public:
    explicit UnboundedError(const std::string& msg) : Error(msg) {}
};

// Solver hit a hard resource limit (branch-and-bound node cap).
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

}  // namespace voltrisk

#endif  // VOLTRISK_ERRORS_HPP_
