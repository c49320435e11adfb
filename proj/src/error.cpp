#include "indepmix/error.hpp"

namespace indepmix {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NEGATIVE_MASS: return "NEGATIVE_MASS";
    case Errc::BAD_LENGTH: return "BAD_LENGTH";
    case Errc::NOT_NORMALIZED: return "NOT_NORMALIZED";
    case Errc::NOT_FINITE: return "NOT_FINITE";
    case Errc::BAD_PARAMETER: return "BAD_PARAMETER";
    case Errc::BOUNDARY: return "BOUNDARY";
    case Errc::ZERO_MASS: return "ZERO_MASS";
    case Errc::NOT_A_COMPONENT: return "NOT_A_COMPONENT";
    case Errc::DEGENERATE: return "DEGENERATE";
    case Errc::DIMENSION_TOO_LARGE: return "DIMENSION_TOO_LARGE";
    case Errc::GRID_TOO_LARGE: return "GRID_TOO_LARGE";
    case Errc::BAD_CPT: return "BAD_CPT";
    case Errc::BAD_MODEL: return "BAD_MODEL";
    case Errc::ALL_ZERO: return "ALL_ZERO";
    case Errc::CAP_EXCEEDED: return "CAP_EXCEEDED";
    case Errc::BAD_FILE: return "BAD_FILE";
    case Errc::INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace indepmix
