#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace harmcoc {

/// Broad classes of failure; the CLI maps them onto exit codes.
enum class ErrorKind {
  Parse,       // malformed input text
  Validation,  // input violates a precondition (non-unitary, bad table, ...)
  Unsupported, // operation not available for this group kind
  GapTooSmall, // refusal to invert (pi0(mu) - I)
  Numerical,   // ambiguous rank decision or internal inconsistency
};

/**
 * Exception carrying the module and operation that raised it, so reports can
 * say where a problem was detected ("reps/validate_rep: NotUnitary ...").
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string where, std::string code, const std::string& detail)
      : std::runtime_error(where + ": " + code + (detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind),
        where_(std::move(where)),
        code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& where() const noexcept { return where_; }
  /// Short machine-readable name, e.g. "NotSymmetric".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string where_;
  std::string code_;
};

/// Three significant digits, for residuals in error messages.
inline std::string format_residual(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace harmcoc
