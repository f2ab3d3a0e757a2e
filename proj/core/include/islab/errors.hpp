#ifndef ISLAB_ERRORS_HPP
#define ISLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace islab {

/// Config or input object violates the expected schema.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A referenced input file does not exist or cannot be read.
struct MissingInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instance exceeds the desk-scale limits this workbench enumerates over.
struct ScaleLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A stored result failed re-verification.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace islab

#endif  // ISLAB_ERRORS_HPP
