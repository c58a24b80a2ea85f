#pragma once

#include <stdexcept>
#include <string>

namespace redorb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REDORB_ERROR(Name)                                   \
  struct Name : Error {                                      \
    explicit Name(const std::string& what) : Error(what) {}  \
  }

REDORB_ERROR(HalvingError);
REDORB_ERROR(DegenerateInput);
REDORB_ERROR(RingTooSmall);
REDORB_ERROR(IndexError);
REDORB_ERROR(NotASquare);
REDORB_ERROR(LengthMismatch);
REDORB_ERROR(NonUnitDiscriminant);
REDORB_ERROR(ZeroSliceEntry);
REDORB_ERROR(BoxTooLarge);
REDORB_ERROR(LevelTooDeep);
REDORB_ERROR(InstanceTooLarge);
REDORB_ERROR(StabilizationFailure);
REDORB_ERROR(InvalidParity);
REDORB_ERROR(FactorizationTimeout);
REDORB_ERROR(ParseError);
REDORB_ERROR(NotInW0);

#undef REDORB_ERROR

}  // namespace redorb
