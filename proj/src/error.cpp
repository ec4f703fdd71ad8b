#include "voxsim/error.hpp"

#include <algorithm>

namespace voxsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLocation: return "UnknownLocation";
    case ErrorCode::UnknownAgentType: return "UnknownAgentType";
    case ErrorCode::InsufficientItems: return "InsufficientItems";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::FieldCountMismatch: return "FieldCountMismatch";
    case ErrorCode::NonIntegerCount: return "NonIntegerCount";
    case ErrorCode::NonPositiveCount: return "NonPositiveCount";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::QuotedField: return "QuotedField";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::CyclicBom: return "CyclicBom";
    case ErrorCode::BomTooDeep: return "BomTooDeep";
    case ErrorCode::MissingWhere: return "MissingWhere";
    case ErrorCode::EmptyParts: return "EmptyParts";
    case ErrorCode::MultiOutputUnsupported: return "MultiOutputUnsupported";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::CoordConflict: return "CoordConflict";
    case ErrorCode::OutOfGrid: return "OutOfGrid";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::MissingParameters: return "MissingParameters";
    case ErrorCode::ReceptorRequired: return "ReceptorRequired";
    case ErrorCode::AgentRequired: return "AgentRequired";
    case ErrorCode::AgentOnBlockedCell: return "AgentOnBlockedCell";
    case ErrorCode::UnobtainableInput: return "UnobtainableInput";
    case ErrorCode::NoSupplyAgentType: return "NoSupplyAgentType";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::UnknownOrder: return "UnknownOrder";
    case ErrorCode::UnsourceableItem: return "UnsourceableItem";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::EmptyEventList: return "EmptyEventList";
    case ErrorCode::UnassignableOrders: return "UnassignableOrders";
    case ErrorCode::Stalled: return "Stalled";
    case ErrorCode::SafetyCapReached: return "SafetyCapReached";
    case ErrorCode::ConservationViolated: return "ConservationViolated";
    case ErrorCode::ModelInvalid: return "ModelInvalid";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::RunInProgress: return "RunInProgress";
    case ErrorCode::NoReport: return "NoReport";
    case ErrorCode::InvalidEdit: return "InvalidEdit";
  }
  return "Unknown";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::error ? "error" : "warning";
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out;
  out += d.where.empty() ? std::string("-") : d.where;
  out += ": ";
  out += to_string(d.severity);
  out += ": ";
  out += to_string(d.code);
  out += ": ";
  out += d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

Error::Error(ErrorCode code, std::string where, const std::string& message)
    : std::runtime_error((where.empty() ? std::string() : where + ": ") +
                         std::string(to_string(code)) + ": " + message),
      code_(code),
      where_(std::move(where)),
      detail_(message) {}

Diagnostic Error::to_diagnostic() const {
  return Diagnostic{Severity::error, code_, where_, detail_};
}

}  // namespace voxsim
