#pragma once

#include <stdexcept>
#include <string>

namespace prlab {

/// Base class for all prlab errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input shapes do not match (matrix/vector sizes, frame dimensions).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// The instance exceeds the documented enumeration budget.
class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& what) : Error(what) {}
};

/// File or JSON parsing problem.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// An internal invariant failed; indicates a bug, not bad input.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

} // namespace prlab
