#pragma once

#include <stdexcept>
#include <string>

namespace attctl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotSkewSymmetric : public Error {
public:
    using Error::Error;
};

class NotNearRotation : public Error {
public:
    using Error::Error;
};

/// Raised when the attitude error vector is requested at (or within a small
/// band of) the antipodal set where Psi = 2.
class AtErrorBoundary : public Error {
public:
    using Error::Error;
};

class InvalidInertia : public Error {
public:
    using Error::Error;
};

class NewtonDivergence : public Error {
public:
    using Error::Error;
};

class ConfigInvalid : public Error {
public:
    ConfigInvalid(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ConfigMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace attctl
