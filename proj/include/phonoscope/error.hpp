#pragma once

#include <stdexcept>
#include <string>

namespace phonoscope {

enum class ErrorKind {
  InvalidArgument,   // precondition violated by the caller
  MissingFile,       // file does not exist / cannot be opened for reading
  MalformedFile,     // file exists but its contents do not parse
  UnsupportedFormat, // recognized container, unsupported encoding
  NotFound,          // a named entity (tier, column, field) is absent
  Io,                // write failure or other OS-level error
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace phonoscope
