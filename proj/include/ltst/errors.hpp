#pragma once

#include <stdexcept>
#include <string>

namespace ltst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad prime, bad window, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The curve has bad reduction at the requested prime.
class ReductionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A configured resource cap (table size, work units) would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// An identity or invariant that must hold exactly was found violated.
class IdentityError : public Error {
public:
    using Error::Error;
};

}  // namespace ltst
