#pragma once

#include <stdexcept>
#include <string>

namespace fpuwave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: violated precondition, malformed config, grid mismatch.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A quantity left the representable double range (delta too small).
class OverflowError : public Error {
public:
    using Error::Error;
};

} // namespace fpuwave
