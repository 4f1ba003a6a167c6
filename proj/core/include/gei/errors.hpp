#pragma once

#include <stdexcept>
#include <string>

namespace gei {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input data is malformed or numerically unusable.
class DataError : public Error {
public:
    using Error::Error;
};

/// A conditional distribution produced a non-finite value.
class ModelEvaluationError : public Error {
public:
    ModelEvaluationError(const std::string& what, std::size_t t, std::size_t series);
    std::size_t time_index() const noexcept { return t_; }
    std::size_t series_index() const noexcept { return series_; }

private:
    std::size_t t_;
    std::size_t series_;
};

/// EM left a regime with (almost) no posterior mass.
class SingularFitError : public Error {
public:
    using Error::Error;
};

/// A computation would exceed a documented size guard.
class SizeGuardError : public Error {
public:
    using Error::Error;
};

}  // namespace gei
