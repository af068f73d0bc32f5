#pragma once

#include <stdexcept>
#include <string>

namespace bsdelab {

/// Raised when an operation is called outside its documented domain
/// (convolution index below threshold, missing constant, bad lattice, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the backward solvers; carries the lattice node where it happened.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int step, long index)
        : std::runtime_error(what + " at node (step " + std::to_string(step) +
                             ", index " + std::to_string(index) + ")"),
          step_(step),
          index_(index) {}

    int step() const noexcept { return step_; }
    long index() const noexcept { return index_; }

private:
    int step_;
    long index_;
};

}  // namespace bsdelab
