#ifndef SRM_ERRORS_HPP
#define SRM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace srm {

/// Whether an error stems from bad input or from a numerical breakdown.
/// The CLI maps these to exit codes 2 and 3.
enum class ErrorKind { Validation, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Module-qualified code such as "vf-dsl.syntax".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(ErrorKind::Validation, "vf-dsl.syntax",
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& msg)
      : Error(ErrorKind::Validation, std::move(code), msg) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string code, const std::string& msg)
      : Error(ErrorKind::Numerical, std::move(code), msg) {}
};

struct NotBracketGenerating : NumericalError {
  explicit NotBracketGenerating(const std::string& msg)
      : NumericalError("flag-analysis.not-bracket-generating", msg) {}
};

struct ChartDegenerate : NumericalError {
  explicit ChartDegenerate(const std::string& msg)
      : NumericalError("frames-nilpotent.chart-degenerate", msg) {}
};

struct TruncationNotGenerating : NumericalError {
  explicit TruncationNotGenerating(const std::string& msg)
      : NumericalError("frames-nilpotent.truncation-not-generating", msg) {}
};

struct StepFailure : NumericalError {
  explicit StepFailure(const std::string& msg) : NumericalError("sr-distance.step-failure", msg) {}
};

struct Unreachable : NumericalError {
  explicit Unreachable(const std::string& msg) : NumericalError("sr-distance.unreachable", msg) {}
};

struct SingularQuotient : NumericalError {
  explicit SingularQuotient(const std::string& msg)
      : NumericalError("popp.singular-quotient", msg) {}
};

struct NotEquisingular : NumericalError {
  NotEquisingular(const std::string& msg, std::string witness_a, std::string witness_b)
      : NumericalError("popp.not-equisingular", msg + " (witnesses " + witness_a + " and " + witness_b + ")"),
        a(std::move(witness_a)),
        b(std::move(witness_b)) {}
  std::string a, b;
};

struct StrataNotPartition : ValidationError {
  explicit StrataNotPartition(const std::string& msg)
      : ValidationError("popp.strata-not-partition", msg) {}
};

}  // namespace srm

#endif  // SRM_ERRORS_HPP
