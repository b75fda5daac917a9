#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kronred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::size_t;
using IndexList = std::vector<Index>;

/// Base of every error raised by the library. `exit_code()` follows the CLI
/// convention: 2 for rejected input, 3 for numerical failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept = 0;
};

/// Malformed or structurally invalid input (schema, indices, partitions).
class InputError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Argument outside the mathematical domain of an operation (e.g. log of a
/// nonpositive concentration).
class DomainError : public InputError {
public:
    using InputError::InputError;
};

/// A computation could not be completed: singular blocks, solver
/// non-convergence, step-size underflow.
class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// Schur complement requested on a (numerically) singular block.
class ReductionInfeasible : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Numerical thresholds shared across modules. All are absolute unless noted.
struct Tolerances {
    double structural_zero = 1e-12;
    double balance_residual = 1e-8;
    double eigen_margin = 1e-10;
    /// relative smallest-singular-value threshold for block invertibility
    double invertibility = 1e-10;
    double interlacing_slack = 1e-9;
    /// relative (floor `moment_floor`) threshold for zero-moment agreement
    double moment_match = 1e-8;
    double moment_floor = 1e-12;
    double lmi_residual = 1e-8;
};

}  // namespace kronred
