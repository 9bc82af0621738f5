#include "lagvac/error.hpp"

namespace lagvac {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::superluminal: return "superluminal-velocity";
    case ErrorKind::degenerate_map: return "degenerate-map";
    case ErrorKind::invalid_weight: return "invalid-weight";
    case ErrorKind::unsupported_exponent: return "unsupported-exponent";
    case ErrorKind::simulation_aborted: return "simulation-aborted";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace lagvac
