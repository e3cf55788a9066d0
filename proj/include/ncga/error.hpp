#pragma once

#include <stdexcept>
#include <string>

namespace ncga {

/// Base of every error raised by the library. Each subclass names one
/// failure mode so callers (and the CLI exit-code mapping) can catch by type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NCGA_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// netgraph
NCGA_DEFINE_ERROR(InvalidNetwork);
NCGA_DEFINE_ERROR(CycleDetected);
NCGA_DEFINE_ERROR(UnreachableReceiver);
NCGA_DEFINE_ERROR(EmptyReceiverSet);
NCGA_DEFINE_ERROR(InfeasibleParameters);
NCGA_DEFINE_ERROR(UnknownLink);
NCGA_DEFINE_ERROR(InvalidSchedule);
NCGA_DEFINE_ERROR(ParseError);

// galois
NCGA_DEFINE_ERROR(FieldMismatch);
NCGA_DEFINE_ERROR(DimensionMismatch);
NCGA_DEFINE_ERROR(RankDeficient);

// coding-eval
NCGA_DEFINE_ERROR(InconsistentAssignment);
NCGA_DEFINE_ERROR(InvalidCoefficients);
NCGA_DEFINE_ERROR(TooLarge);

// ga-core
NCGA_DEFINE_ERROR(LengthMismatch);
NCGA_DEFINE_ERROR(InvalidParams);

// p2p-sim
NCGA_DEFINE_ERROR(MissingGaResult);

// cli
NCGA_DEFINE_ERROR(IoError);
NCGA_DEFINE_ERROR(ConfigError);

#undef NCGA_DEFINE_ERROR

}  // namespace ncga
