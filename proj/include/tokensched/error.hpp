#pragma once

#include <stdexcept>
#include <string>

namespace tokensched {

/// Error category; the CLI maps each to a process exit code.
enum class ErrorKind {
  Input,       // malformed or out-of-contract input (exit 2)
  Infeasible,  // no feasible placement / capability exceeded (exit 3)
  Internal,    // invariant breach (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& what) {
  throw Error(ErrorKind::Input, what);
}

[[noreturn]] inline void fail_infeasible(const std::string& what) {
  throw Error(ErrorKind::Infeasible, what);
}

[[noreturn]] inline void fail_internal(const std::string& what) {
  throw Error(ErrorKind::Internal, what);
}

}  // namespace tokensched
