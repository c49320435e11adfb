#pragma once

#include <stdexcept>
#include <string>

namespace indepmix {

// Stable error codes; what() is "<CODE>: <detail>".
enum class Errc {
  NEGATIVE_MASS,
  BAD_LENGTH,
  NOT_NORMALIZED,
  NOT_FINITE,
  BAD_PARAMETER,
  BOUNDARY,
  ZERO_MASS,
  NOT_A_COMPONENT,
  DEGENERATE,
  DIMENSION_TOO_LARGE,
  GRID_TOO_LARGE,
  BAD_CPT,
  BAD_MODEL,
  ALL_ZERO,
  CAP_EXCEEDED,
  BAD_FILE,
  INTERNAL,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& detail);

}  // namespace indepmix
