#pragma once

#include <stdexcept>
#include <string>

namespace breakup {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define BREAKUP_ERROR(Name)                 \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

BREAKUP_ERROR(DomainError);
BREAKUP_ERROR(InconsistencyError);
BREAKUP_ERROR(SingularityError);
BREAKUP_ERROR(GenericityError);
BREAKUP_ERROR(ShapeError);
BREAKUP_ERROR(RangeError);
BREAKUP_ERROR(NearSingularError);
BREAKUP_ERROR(PoleError);
BREAKUP_ERROR(BranchError);
BREAKUP_ERROR(InstabilityError);
BREAKUP_ERROR(SpacingError);
BREAKUP_ERROR(ConfigError);

#undef BREAKUP_ERROR

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double T) : Error(what), T_(T) {}
  double failing_T() const { return T_; }

 private:
  double T_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace breakup
