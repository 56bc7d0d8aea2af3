// Error types shared across the library. Each condition the file formats,
// models, and evaluators can reject gets its own exception type so callers
// (and the CLI exit-code mapping) can tell data problems apart.

#ifndef REDREP_ERRORS_HPP
#define REDREP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace redrep {

// Base class for every data/usage error raised by this library.
// Anything else escaping a redrep call is an internal error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define REDREP_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

// corpus
REDREP_DEFINE_ERROR(MalformedLine);
REDREP_DEFINE_ERROR(UnknownLabel);
REDREP_DEFINE_ERROR(MixedLabeling);
REDREP_DEFINE_ERROR(EmptyDocument);
REDREP_DEFINE_ERROR(UnlabeledCorpus);

// rir
REDREP_DEFINE_ERROR(InconsistentSpans);

// features
REDREP_DEFINE_ERROR(EmptyCorpus);
REDREP_DEFINE_ERROR(IndexNotFrozen);

// models
REDREP_DEFINE_ERROR(EmptyData);
REDREP_DEFINE_ERROR(DimensionMismatch);
REDREP_DEFINE_ERROR(UnsupportedVersion);
REDREP_DEFINE_ERROR(CorruptFile);

// eval
REDREP_DEFINE_ERROR(DegenerateAgreement);
REDREP_DEFINE_ERROR(ShapeMismatch);

// synth / config
REDREP_DEFINE_ERROR(InvalidConfig);

#undef REDREP_DEFINE_ERROR

}  // namespace redrep

#endif  // REDREP_ERRORS_HPP
