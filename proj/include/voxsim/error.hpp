#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voxsim {

enum class ErrorCode {
  // core model
  UnknownLocation,
  UnknownAgentType,
  InsufficientItems,
  // ingest
  MissingColumn,
  DuplicateColumn,
  FieldCountMismatch,
  NonIntegerCount,
  NonPositiveCount,
  EmptyField,
  QuotedField,
  MalformedDocument,
  MissingField,
  InvalidValue,
  CyclicBom,
  BomTooDeep,
  MissingWhere,
  EmptyParts,
  MultiOutputUnsupported,
  DuplicateId,
  CoordConflict,
  OutOfGrid,
  GridTooLarge,
  MissingParameters,
  ReceptorRequired,
  AgentRequired,
  AgentOnBlockedCell,
  UnobtainableInput,
  NoSupplyAgentType,
  // order book
  IllegalTransition,
  UnknownOrder,
  UnsourceableItem,
  // routing
  Unreachable,
  // engine
  EmptyEventList,
  UnassignableOrders,
  Stalled,
  SafetyCapReached,
  ConservationViolated,
  ModelInvalid,
  // service
  UnknownSession,
  RunInProgress,
  NoReport,
  InvalidEdit,
};

std::string_view to_string(ErrorCode code);

enum class Severity { error, warning };

std::string_view to_string(Severity severity);

// One finding about an input. `where` is a file:row or an entity ID, whatever
// pins the finding down for a reader.
struct Diagnostic {
  Severity severity = Severity::error;
  ErrorCode code = ErrorCode::InvalidValue;
  std::string where;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Renders "where: severity: Code: message".
std::string format_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string where, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }
  const std::string& detail() const noexcept { return detail_; }

  Diagnostic to_diagnostic() const;

 private:
  ErrorCode code_;
  std::string where_;
  std::string detail_;
};

}  // namespace voxsim
