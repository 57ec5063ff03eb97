#include "smatch/error.hpp"

namespace smatch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::degenerate_neuron: return "degenerate-neuron";
    case ErrorKind::parse: return "parse";
    case ErrorKind::format: return "format";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::generation: return "generation";
  }
  return "unknown";
}

}  // namespace smatch
