#ifndef EXD_ERRORS_H_
#define EXD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace exd {

// Operation called on a graph lacking required data (e.g. no edge lengths).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A documented precondition of an operation does not hold.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input too large for an exhaustive routine.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Demand that cannot be routed at any congestion (crosses components).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal guarantee failed at runtime. Carries the audit context when one
// is available.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stored artifacts disagree with their recomputation.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line` is 1-based; 0 when not attributable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace exd

#endif  // EXD_ERRORS_H_
