#include "bessbid/error.hpp"

namespace bessbid {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Data: return "data";
    case ErrorKind::Config: return "config";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Solver: return "solver";
  }
  return "unknown";
}

}  // namespace bessbid
