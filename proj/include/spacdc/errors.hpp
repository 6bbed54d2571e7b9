#ifndef SPACDC_ERRORS_HPP
#define SPACDC_ERRORS_HPP

#include <stdexcept>

namespace spacdc {

// Error taxonomy shared across the library. The CLI maps these onto its
// exit-code contract: ConfigError -> 2, JobFailedError -> 3, IoError -> 4.
// Argument/shape misuse keeps the standard std::invalid_argument /
// std::range_error types.

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class JobFailedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spacdc

#endif
