#pragma once

#include <stdexcept>
#include <string>

namespace fillvol {

/// Base for all library failures. `name()` is the stable identifier the CLI
/// prints on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define FILLVOL_DEFINE_ERROR(Type)                                        \
  class Type : public Error {                                             \
   public:                                                                \
    explicit Type(const std::string& what) : Error(#Type, what) {}        \
  }

FILLVOL_DEFINE_ERROR(NotPrime);
FILLVOL_DEFINE_ERROR(NotScalable);
FILLVOL_DEFINE_ERROR(UnknownGenerator);
FILLVOL_DEFINE_ERROR(RadiusExceeded);
FILLVOL_DEFINE_ERROR(BoundaryError);
FILLVOL_DEFINE_ERROR(Overflow);
FILLVOL_DEFINE_ERROR(NotInverse);
FILLVOL_DEFINE_ERROR(NotInjective);
FILLVOL_DEFINE_ERROR(DimensionMismatch);
FILLVOL_DEFINE_ERROR(InvalidStrategy);
FILLVOL_DEFINE_ERROR(InvalidArgument);

#undef FILLVOL_DEFINE_ERROR

/// Text input rejected; carries 1-based line/column when known.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string reason, int line, int column, const std::string& detail)
      : Error("SyntaxError", format(reason, line, column, detail)),
        reason_(std::move(reason)),
        line_(line),
        column_(column) {}

  [[nodiscard]] const std::string& reason() const noexcept { return reason_; }
  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& reason, int line, int column,
                            const std::string& detail) {
    std::string out = reason;
    if (line > 0) out += " at " + std::to_string(line) + ":" + std::to_string(column);
    if (!detail.empty()) out += ": " + detail;
    return out;
  }

  std::string reason_;
  int line_;
  int column_;
};

}  // namespace fillvol
