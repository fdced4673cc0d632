#ifndef ROOTFLOW_ERRORS_HPP
#define ROOTFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rootflow {

/// Broad failure classes. The CLI maps these onto exit codes.
enum class ErrorClass {
  Parse,          // malformed input
  Precondition,   // caller violated an operation's precondition
  Genericity,     // a flatness/truncation decision blocks progress
  Numerical,      // a numerical backend failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const char* kind, const std::string& what)
      : std::runtime_error(std::string(kind) + ": " + what), cls_(cls), kind_(kind) {}

  ErrorClass error_class() const noexcept { return cls_; }
  const char* kind() const noexcept { return kind_; }

 private:
  ErrorClass cls_;
  const char* kind_;
};

#define ROOTFLOW_DEFINE_ERROR(Name, Class)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, #Name, what) {} \
  }

ROOTFLOW_DEFINE_ERROR(ParseError, Parse);
ROOTFLOW_DEFINE_ERROR(PreconditionViolated, Precondition);
ROOTFLOW_DEFINE_ERROR(OrderTooLow, Precondition);
ROOTFLOW_DEFINE_ERROR(NotInvertible, Precondition);
ROOTFLOW_DEFINE_ERROR(NotSimpleRoot, Precondition);
ROOTFLOW_DEFINE_ERROR(NoSplit, Precondition);
ROOTFLOW_DEFINE_ERROR(UnsupportedInJetMode, Precondition);
ROOTFLOW_DEFINE_ERROR(NotNormal, Precondition);
ROOTFLOW_DEFINE_ERROR(AllCoefficientsZero, Genericity);
ROOTFLOW_DEFINE_ERROR(FlatCoefficient, Genericity);
ROOTFLOW_DEFINE_ERROR(GenericityViolated, Genericity);
ROOTFLOW_DEFINE_ERROR(TruncationExhausted, Genericity);
ROOTFLOW_DEFINE_ERROR(UndeterminedOrder, Genericity);
ROOTFLOW_DEFINE_ERROR(RankDrop, Genericity);
ROOTFLOW_DEFINE_ERROR(IllConditioned, Numerical);
ROOTFLOW_DEFINE_ERROR(DidNotConverge, Numerical);
// An exact computation needed an algebraic number outside the exact field.
ROOTFLOW_DEFINE_ERROR(NotRepresentable, Numerical);

#undef ROOTFLOW_DEFINE_ERROR

}  // namespace rootflow

#endif  // ROOTFLOW_ERRORS_HPP
