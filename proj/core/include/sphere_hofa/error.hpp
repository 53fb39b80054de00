#pragma once

#include <stdexcept>
#include <string>

namespace shofa {

enum class ErrorKind {
  InvalidInput,
  BudgetExceeded,
  Infeasible,
  NotIntegerValued,
  ValueRange,
  RankHypothesis,
  PivotZero,
  ZeroMatrix,
  DependentShifts,
  NotConsistent,
  RankTooSmall,
  Unsupported,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::InvalidInput, msg);
}

}  // namespace shofa
