#include "staticlab/errors.hpp"

namespace staticlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::DegenerateMetric: return "degenerate_metric";
    case ErrorCode::Inconsistency: return "inconsistency";
    case ErrorCode::PotentialSign: return "potential_sign";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Stiffness: return "stiffness";
    case ErrorCode::Chart: return "chart";
    case ErrorCode::Frame: return "frame";
    case ErrorCode::Span: return "span";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::TraceCorruption: return "trace_corruption";
    case ErrorCode::Initialization: return "initialization";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace staticlab
