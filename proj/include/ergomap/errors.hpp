#pragma once

#include <stdexcept>
#include <string>

namespace ergomap {

/// Base of every contract error raised by the library. The CLI maps these
/// to exit code 2 and prints what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ERGOMAP_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

ERGOMAP_DEFINE_ERROR(DomainError);
ERGOMAP_DEFINE_ERROR(ParseError);
ERGOMAP_DEFINE_ERROR(SizeError);
ERGOMAP_DEFINE_ERROR(InvalidTuple);
ERGOMAP_DEFINE_ERROR(ContinuityError);
ERGOMAP_DEFINE_ERROR(EquivalenceError);
ERGOMAP_DEFINE_ERROR(NotPreservingError);
ERGOMAP_DEFINE_ERROR(StructureError);
ERGOMAP_DEFINE_ERROR(BudgetError);
ERGOMAP_DEFINE_ERROR(RangeError);
ERGOMAP_DEFINE_ERROR(DivisibilityError);
ERGOMAP_DEFINE_ERROR(ConstructionError);
ERGOMAP_DEFINE_ERROR(ExpandingRequired);

#undef ERGOMAP_DEFINE_ERROR

}  // namespace ergomap
