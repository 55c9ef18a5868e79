#pragma once

#include <stdexcept>
#include <string>

namespace pumpout {

/// Malformed external input: IDX files, CSV files, transition-matrix files.
/// The message names the offending file and, where known, the byte offset
/// or line number.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad experiment configuration; the message carries the offending key path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric failure: singular matrices, non-finite inputs.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pumpout
