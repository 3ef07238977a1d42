#pragma once

#include <stdexcept>
#include <string>

namespace ecac {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ECAC_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

ECAC_DEFINE_ERROR(ParseError);
ECAC_DEFINE_ERROR(EmptyDataset);
ECAC_DEFINE_ERROR(InvalidSpec);
ECAC_DEFINE_ERROR(DimensionMismatch);
ECAC_DEFINE_ERROR(InvalidRadius);
ECAC_DEFINE_ERROR(DegenerateDataset);
ECAC_DEFINE_ERROR(InvalidK);
ECAC_DEFINE_ERROR(EmptyCenters);
ECAC_DEFINE_ERROR(LabelOutOfRange);
ECAC_DEFINE_ERROR(ConfigError);
ECAC_DEFINE_ERROR(MissingResult);
ECAC_DEFINE_ERROR(NotPlottable);

#undef ECAC_DEFINE_ERROR

}  // namespace ecac
