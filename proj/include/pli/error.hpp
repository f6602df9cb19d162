#pragma once

#include <stdexcept>
#include <string>

namespace pli {

/// Error type thrown by all pli operations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& message) { throw Error(message); }

}  // namespace pli
