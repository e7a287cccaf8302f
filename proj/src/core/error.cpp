#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::data: return "data";
    case ErrorKind::domain: return "domain";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::usage: return "usage";
    case ErrorKind::model: return "model";
    case ErrorKind::bracket: return "bracket";
    case ErrorKind::budget: return "budget";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw LabError(kind, std::string(to_string(kind)) + " error: " + message);
}

}  // namespace ensemble_lab
