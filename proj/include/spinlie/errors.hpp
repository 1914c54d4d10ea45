#ifndef SPINLIE_ERRORS_HPP
#define SPINLIE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spinlie {

/// Malformed input: bad syntax, wrong shapes, unknown names.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression, carrying the byte offset of the failure.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

  /// Same error with `prefix` prepended to the message (file, line).
  ParseError withContext(const std::string& prefix) const {
    return ParseError(prefix + what(), offset_, Preformatted{});
  }

 private:
  struct Preformatted {};
  ParseError(const std::string& message, std::size_t offset, Preformatted)
      : InputError(message), offset_(offset) {}

  std::size_t offset_;
};

/// A mathematical precondition does not hold (singular matrix, wrong
/// signature, evaluation outside the domain, non-Killing field, ...).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  /// Residual that violated the precondition, when one applies.
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Evaluation of an expression hit log(x<=0), sqrt(x<0) or x/0.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace spinlie

#endif  // SPINLIE_ERRORS_HPP
