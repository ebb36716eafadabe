#pragma once

#include <stdexcept>
#include <string>

namespace r0gp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user-facing input: files, configs, out-of-range arguments.
class InputError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge or produced unusable output.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace r0gp
