#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates a precondition (empty series, bad level, bad lag grid).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A filtered series is all zeros or all ones, so its correlation is undefined.
class DegenerateLevel : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (unsorted ticks, bad prices, bad CSV).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace qcorr
