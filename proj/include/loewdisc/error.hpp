#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace loewdisc {

/// Base of every error thrown by the library. `kind()` drives the CLI exit code.
class Error : public std::runtime_error {
public:
    enum class Kind { numeric, unsupported, usage, io };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Iterative kernel did not converge, or a result failed its residual check.
class NumericFailure : public Error {
public:
    explicit NumericFailure(const std::string& what) : Error(Kind::numeric, what) {}
};

/// Sylvester/Lyapunov equation whose spectral solvability condition fails.
class SingularEquation : public Error {
public:
    explicit SingularEquation(const std::string& what) : Error(Kind::numeric, what) {}
};

/// A transfer function was evaluated at (or numerically on top of) a pole.
class PoleHit : public Error {
public:
    PoleHit(std::complex<double> at, const std::string& what) : Error(Kind::numeric, what), at_(at) {}

    std::complex<double> at() const noexcept { return at_; }

private:
    std::complex<double> at_;
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(Kind::usage, what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(Kind::usage, what) {}
};

/// Method/model combination the library deliberately does not handle.
class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& what) : Error(Kind::unsupported, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(Kind::io, what) {}
};

}  // namespace loewdisc
