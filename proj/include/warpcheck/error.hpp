#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpcheck {

enum class ErrorKind {
  degenerate_input,
  invalid_input,
  numerical_domain,
  degenerate_metric,
  degenerate_plane,
  invalid_warping,
  invalid_parameter,
  singular_parameter,
  invalid_frame,
  immersion_degeneracy,
  invalid_configuration,
  inadmissible_tuple,
  parse,
  validation,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code logic) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace warpcheck
