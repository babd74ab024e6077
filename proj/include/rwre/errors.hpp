#pragma once

#include <stdexcept>
#include <string>

namespace rwre {

// Invalid model parameters, box violations, malformed config files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requires E[log rho] < 0 and the model does not satisfy it.
struct NotTransientRight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A certified series truncation could not reach its tolerance.
struct TruncationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Information matrix is not positive definite; no confidence region.
struct SingularFisher : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No site ever departed, so departure statistics are undefined.
struct EmptyPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A summary cell has no usable replicates.
struct EmptyCell : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too few records for the requested diagnostic.
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rwre
