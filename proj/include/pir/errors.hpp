#pragma once

#include <stdexcept>

namespace pir {

// Invalid argument to an operation: bad lengths, broken divisibility
// constraints, values outside their declared range.
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A file (database/storage) does not match its on-disk format.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A malformed query, response, or frame reached a protocol endpoint.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Connection-level failure while talking to a server daemon.
struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pir
