// errors.hpp: exception hierarchy shared by all otto modules.
#pragma once

#include <stdexcept>
#include <string>

namespace otto {

// Base for every error raised by the library. The CLI maps ConfigError to
// exit code 2 and every other otto::Error to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical input (non-finite numbers, beta <= 0, swapped bath labels).
class DomainError : public Error {
public:
    using Error::Error;
};

// Rate model evaluated where it diverges (BosePower with n = 0 at eps -> 0).
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

// ODE integration failed to meet its tolerance or left [0, 1].
class IntegrationError : public Error {
public:
    using Error::Error;
};

// Protocol without dissipation: the monodromy constant is 1.
class NoUniqueCycleError : public Error {
public:
    using Error::Error;
};

// Time split requested with a vanishing rate.
class DegenerateSplitError : public DomainError {
public:
    using DomainError::DomainError;
};

// Accelerator feasibility region has no point inside the box.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Efficiency or COP requested on gaps where the ratio is undefined.
class UndefinedRatioError : public DomainError {
public:
    using DomainError::DomainError;
};

class RootNotFoundError : public Error {
public:
    using Error::Error;
};

// Optimizer hit the box inside an expansion window.
class ExpansionInvalidError : public Error {
public:
    using Error::Error;
};

// Fast-driving (or other asymptotic) regime precondition violated.
class RegimeError : public Error {
public:
    using Error::Error;
};

// Cycle has no probability interval to split.
class SplitUndefinedError : public Error {
public:
    using Error::Error;
};

// Malformed or unknown configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace otto
