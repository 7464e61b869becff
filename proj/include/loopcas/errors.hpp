#ifndef LOOPCAS_ERRORS_HPP
#define LOOPCAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loopcas {

// One code per contract violation named in the module interfaces. Callers
// that map errors to exit codes or report records switch on the code, not
// on the message text.
enum class Errc {
  MissingAssignment,
  ChartOutOfRange,
  WindowUnderflow,
  OutsideWindow,
  DegreeZero,
  NotClosed,
  NotRelative,
  WeightOverflow,
  OutsideClass,
  InsufficientWindow,
  PointsNotDistinct,
  ExpansionOrderExceeded,
  SyntaxError,
  UnknownField,
  InvalidRational,
  InvalidVariableToken,
  BadArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace loopcas

#endif
