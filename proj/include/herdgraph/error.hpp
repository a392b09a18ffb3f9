#pragma once

#include <stdexcept>
#include <string>

namespace herdgraph {

/// Broad failure categories. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  Config,     // invalid or incomplete configuration
  Schema,     // well-formed input that violates a file schema
  Parse,      // malformed input text
  Data,       // input data unusable for the requested computation
  Usage,      // bad command-line usage
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable tag, e.g. "OutOfOrderFrame" or "TooFewGroups".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error data_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Data, std::move(code), message);
}

}  // namespace herdgraph
