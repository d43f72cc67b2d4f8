#pragma once

#include <stdexcept>
#include <string>

namespace schro1d {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// C2 = C1 + |E| vanished, so K and delta are undefined.
class DegenerateConstants : public Error {
public:
    using Error::Error;
};

class OverflowAtX : public Error {
public:
    OverflowAtX(double x, const std::string& what) : Error(what), x_(x) {}
    double x() const noexcept { return x_; }

private:
    double x_;
};

class TraceTooShort : public Error {
public:
    using Error::Error;
};

class NoEligiblePoints : public Error {
public:
    using Error::Error;
};

class NotRealSolution : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class InadmissibleWeight : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

// Configuration problem; `path` names the offending field, e.g. "scenarios[2].energy".
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace schro1d
