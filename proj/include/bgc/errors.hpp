#pragma once

#include <stdexcept>
#include <string>

namespace bgc {

// Malformed text input (edge lists, ordering files). Messages carry the
// offending line number.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed binary container (bad magic, truncated header, size mismatch).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Undecodable bit payload. Messages identify the failing record.
class CorruptStreamError : public FormatError {
 public:
  explicit CorruptStreamError(const std::string& what) : FormatError(what) {}
};

}  // namespace bgc
