#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fusecalc {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string file;
  int line = 0;
  int col = 0;
  std::string message;

  std::string render() const;
};

/// Thrown by the parser on the first syntax or static validation error.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d) : std::runtime_error(d.render()), diag_(std::move(d)) {}
  const Diagnostic& diag() const { return diag_; }

 private:
  Diagnostic diag_;
};

/// Runtime evaluation failure (unbound variable at a built-in, bad DL term,
/// exceeded step budget, ...).
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fusecalc
