#pragma once

#include <stdexcept>
#include <string>

namespace pbench {

/// Failure categories shared by the library, the HTTP layer and the CLI exit codes.
enum class ErrorKind {
  InvalidInput,   // malformed CSV/JSON, schema violations, precondition failures
  NotFound,       // unknown experiment/session/ticket
  Conflict,       // session already uploaded, ticket already used
  Expired,        // ticket or session past its lifetime
  TooLarge,       // upload over the size cap
  Analysis,       // numerical failure inside an analysis
  Io,             // filesystem trouble
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace pbench
