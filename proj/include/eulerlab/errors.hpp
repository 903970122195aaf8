#pragma once
// Exception hierarchy shared by every module. Each error carries a short
// machine-readable kind that the CLI copies into reports.
#include <stdexcept>
#include <string>

namespace eulerlab {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define EULERLAB_ERROR(Name)                                        \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  }

EULERLAB_ERROR(PrecisionError);
EULERLAB_ERROR(PrecisionLoss);
EULERLAB_ERROR(DomainError);
EULERLAB_ERROR(NotOrdinary);
EULERLAB_ERROR(LevelError);
EULERLAB_ERROR(ConductorError);
EULERLAB_ERROR(NotInIdeal);
EULERLAB_ERROR(IncompatibleTower);
EULERLAB_ERROR(ArityError);
EULERLAB_ERROR(RoleError);
EULERLAB_ERROR(NotCocycle);
EULERLAB_ERROR(HypothesisError);
EULERLAB_ERROR(InfeasibleTarget);
EULERLAB_ERROR(SymmetryError);
EULERLAB_ERROR(MissingTateData);
EULERLAB_ERROR(ValidationError);
EULERLAB_ERROR(InsufficientDepth);
EULERLAB_ERROR(ReductionMismatch);
EULERLAB_ERROR(LevelMismatch);
EULERLAB_ERROR(UnknownSuite);
EULERLAB_ERROR(SchemaError);

#undef EULERLAB_ERROR

// Division failure keeps the offending coordinate and how deep it sits in
// the augmentation filtration.
class NotDivisible : public Error {
 public:
  NotDivisible(int coord, int order, const std::string& what)
      : Error("NotDivisible", what), coord_(coord), order_(order) {}
  int coord() const noexcept { return coord_; }
  int aug_order() const noexcept { return order_; }

 private:
  int coord_;
  int order_;
};

// A series expected to vanish to some order has a nonzero low coefficient.
class OrderViolation : public Error {
 public:
  OrderViolation(int index, const std::string& what)
      : Error("OrderViolation", what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

}  // namespace eulerlab
