#pragma once

#include <stdexcept>
#include <string>

namespace semitop {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotCompact : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotLocallyClosed : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when the engine cannot certify the closure structure of a cell at
// infinity; an honest failure instead of a silently wrong complex.
struct UnsupportedGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace semitop
