#ifndef UCCA_ERROR_HPP
#define UCCA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ucca {

enum class ErrorCode {
  InvalidArgument,
  XmlSyntax,
  Schema,
  Cycle,
  MultiplePrimaryParents,
  UnreachableTerminal,
  DanglingReference,
  InvalidModel,   // any other graph invariant violation
  UnknownUnit,
  TokenMismatch,
  MissingPassage,
  IllegalTransition,
  OracleFailure,
  ModelFormat,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string subject = {})
      : std::runtime_error(std::move(message)), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const { return code_; }

  // Id of the offending unit/edge when the error names one.
  const std::string& subject() const { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace ucca

#endif
