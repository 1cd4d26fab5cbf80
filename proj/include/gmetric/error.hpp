#pragma once

#include <stdexcept>
#include <string>

namespace gmetric {

enum class ErrorCode {
  parse,
  invalid_sample,
  index_out_of_range,
  order_mismatch,
  incompatible_sample,
  invalid_parameter,
  enumeration_limit,
};

// Single exception type for the library; `code()` distinguishes the cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gmetric
