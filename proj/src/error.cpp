#include "warpcheck/error.hpp"

namespace warpcheck {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::numerical_domain: return "numerical-domain";
    case ErrorKind::degenerate_metric: return "degenerate-metric";
    case ErrorKind::degenerate_plane: return "degenerate-plane";
    case ErrorKind::invalid_warping: return "invalid-warping";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::singular_parameter: return "singular-parameter";
    case ErrorKind::invalid_frame: return "invalid-frame";
    case ErrorKind::immersion_degeneracy: return "immersion-degeneracy";
    case ErrorKind::invalid_configuration: return "invalid-configuration";
    case ErrorKind::inadmissible_tuple: return "inadmissible-tuple";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace warpcheck
