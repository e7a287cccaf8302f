#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ensemble_lab {

enum class ErrorKind {
  configuration,      // bad model/scheme combination
  data,               // NaN or otherwise unusable evaluation
  domain,             // value outside the supported range (e.g. +inf on a grid)
  precondition,       // caller violated a documented requirement
  insufficient_data,  // not enough finite points to decide
  usage,              // API misuse (mismatched grids, bad arguments)
  model,              // model violates a structural assumption
  bracket,            // root bracket does not straddle the target
  budget,             // iteration/sweep budget exhausted
};

std::string_view to_string(ErrorKind kind);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace ensemble_lab
