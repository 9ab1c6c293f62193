#pragma once

#include <stdexcept>
#include <string>

namespace edsq {

enum class ErrorKind {
  InvalidArgument,  // bad input or violated precondition
  BudgetExhausted,  // factoring / search / size budget ran out
  Falsified,        // a checked claim failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_argument(const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, what);
}

[[noreturn]] inline void fail_budget(const std::string& what) {
  throw Error(ErrorKind::BudgetExhausted, what);
}

}  // namespace edsq
