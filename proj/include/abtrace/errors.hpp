#pragma once

#include <stdexcept>
#include <string>

namespace abtrace {

/// Base of every failure raised by the numerical modules. Precondition
/// violations (bad arguments) use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ABTRACE_DEFINE_ERROR(Name)                                   \
    class Name : public NumericalError {                             \
    public:                                                          \
        explicit Name(const std::string& what)                       \
            : NumericalError(std::string(#Name ": ") + what) {}      \
    }

// billiards
ABTRACE_DEFINE_ERROR(TangentialHit);
ABTRACE_DEFINE_ERROR(ReflectionAdjacent);
// beams
ABTRACE_DEFINE_ERROR(FocalPoint);
ABTRACE_DEFINE_ERROR(NonClosedPath);
ABTRACE_DEFINE_ERROR(SingularFrame);
ABTRACE_DEFINE_ERROR(SingularHessian);
// spectra
ABTRACE_DEFINE_ERROR(DomainError);
ABTRACE_DEFINE_ERROR(ConvergenceFailure);
ABTRACE_DEFINE_ERROR(NotCurlFree);
// trace
ABTRACE_DEFINE_ERROR(IncompleteSpectrum);
ABTRACE_DEFINE_ERROR(QuadratureFailure);
ABTRACE_DEFINE_ERROR(IsolationViolation);
ABTRACE_DEFINE_ERROR(GenericityFailure);

#undef ABTRACE_DEFINE_ERROR

} // namespace abtrace
