#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define RDLAB_DEFINE_ERROR(Name)                     \
    class Name : public Error {                      \
    public:                                          \
        explicit Name(const std::string& what)       \
            : Error(#Name ": " + what) {}            \
    }

RDLAB_DEFINE_ERROR(DomainError);
RDLAB_DEFINE_ERROR(OverflowError);
RDLAB_DEFINE_ERROR(UnboundedEnvelope);
RDLAB_DEFINE_ERROR(SignError);
RDLAB_DEFINE_ERROR(InconclusiveError);
RDLAB_DEFINE_ERROR(ConcavityMismatch);
RDLAB_DEFINE_ERROR(BlowUpError);
RDLAB_DEFINE_ERROR(NotOsgoodError);
RDLAB_DEFINE_ERROR(NoRootError);
RDLAB_DEFINE_ERROR(ConvergenceError);
RDLAB_DEFINE_ERROR(EnvelopeDominanceError);
RDLAB_DEFINE_ERROR(ConditionL1Error);
RDLAB_DEFINE_ERROR(KExhaustedError);
RDLAB_DEFINE_ERROR(StabilityError);
RDLAB_DEFINE_ERROR(NewtonDivergenceError);
RDLAB_DEFINE_ERROR(NotConvergedError);
RDLAB_DEFINE_ERROR(ConfigError);
RDLAB_DEFINE_ERROR(ScenarioError);

#undef RDLAB_DEFINE_ERROR

}  // namespace rdlab
