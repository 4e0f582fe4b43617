#pragma once

#include <stdexcept>

namespace divret {

/// Input violates a documented precondition: bad weights, returns at or
/// below -100%, mismatched lengths and so on.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file could not be opened or read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace divret
