#pragma once

#include <stdexcept>
#include <string>

namespace beurling {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input that violates a documented precondition (bad shape, bad name, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// A numerical certificate failed: the object does not have the claimed property.
class VerificationError : public Error {
public:
    VerificationError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace beurling
