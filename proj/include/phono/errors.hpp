#pragma once

#include <stdexcept>
#include <string>

namespace phono {

// Base class for all recoverable data/domain errors. Anything derived from
// Error maps to a data problem (CLI exit code 2); std::logic_error escaping
// the library indicates a broken internal invariant (exit code 3).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PHONO_DEFINE_ERROR(Name)                                     \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

// signal-io
PHONO_DEFINE_ERROR(MalformedWav);
PHONO_DEFINE_ERROR(UnsupportedEncoding);
PHONO_DEFINE_ERROR(RateTooLow);
PHONO_DEFINE_ERROR(DegenerateSignal);

// dsp-core
PHONO_DEFINE_ERROR(SignalTooShort);
PHONO_DEFINE_ERROR(BadBand);
PHONO_DEFINE_ERROR(TooShort);
PHONO_DEFINE_ERROR(EmptyInterval);

// segmentation
PHONO_DEFINE_ERROR(NoPeriodicity);
PHONO_DEFINE_ERROR(TooFewPeaks);
PHONO_DEFINE_ERROR(NoCrossing);

// features
PHONO_DEFINE_ERROR(CycleTooShort);
PHONO_DEFINE_ERROR(LayoutMismatch);

// classifiers
PHONO_DEFINE_ERROR(EmptyTrainSet);
PHONO_DEFINE_ERROR(SingleClassTrainSet);
PHONO_DEFINE_ERROR(NonConvergence);
PHONO_DEFINE_ERROR(EmptyValidationSet);
PHONO_DEFINE_ERROR(DivergentLoss);
PHONO_DEFINE_ERROR(InsufficientClassData);
PHONO_DEFINE_ERROR(SchemaMismatch);

// pipeline-eval
PHONO_DEFINE_ERROR(ClassTooSmall);

// synth-data / corpus
PHONO_DEFINE_ERROR(InvalidParams);
PHONO_DEFINE_ERROR(ManifestMismatch);

// cli / config
PHONO_DEFINE_ERROR(ConfigError);

#undef PHONO_DEFINE_ERROR

} // namespace phono
