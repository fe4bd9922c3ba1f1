#pragma once

#include <stdexcept>
#include <string>

namespace qes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A closed-form denominator vanishes (to within relative epsilon).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Confined solution with alpha = +sqrt(a) cannot be continued to (0, inf).
class NotMappableError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue search could not bracket the requested state.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Radial integration produced non-finite values or the grid is unusable.
class GridError : public Error {
public:
    using Error::Error;
};

/// Finite-difference eigenvalue did not settle under grid refinement.
class ResolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace qes
