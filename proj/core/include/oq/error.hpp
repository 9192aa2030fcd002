#pragma once

#include <stdexcept>
#include <string>

namespace oq {

// Error categories double as the CLI exit codes.
enum class Errc {
  CheckFailure = 1,
  Parse = 2,
  Precondition = 3,
  ResourceCap = 4,
  Internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(Errc::Parse, msg) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& msg) : Error(Errc::Precondition, msg) {}
};

struct ResourceCapError : Error {
  explicit ResourceCapError(const std::string& msg) : Error(Errc::ResourceCap, msg) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& msg) : Error(Errc::Internal, msg) {}
};

}  // namespace oq
