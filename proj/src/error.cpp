#include "phonoscope/error.hpp"

namespace phonoscope {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:   return "invalid-argument";
    case ErrorKind::MissingFile:       return "missing-file";
    case ErrorKind::MalformedFile:     return "malformed-file";
    case ErrorKind::UnsupportedFormat: return "unsupported-format";
    case ErrorKind::NotFound:          return "not-found";
    case ErrorKind::Io:                return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace phonoscope
