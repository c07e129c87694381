#pragma once

#include <stdexcept>
#include <string>

namespace hexbend {

/// Base class of every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HEXBEND_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

HEXBEND_DEFINE_ERROR(EmptyLattice);
HEXBEND_DEFINE_ERROR(UnknownAtom);
HEXBEND_DEFINE_ERROR(BadVariant);
HEXBEND_DEFINE_ERROR(InvalidMaterial);
HEXBEND_DEFINE_ERROR(DimensionMismatch);
HEXBEND_DEFINE_ERROR(QuadratureNotConverged);
HEXBEND_DEFINE_ERROR(CGNotConverged);
HEXBEND_DEFINE_ERROR(SingularOperator);
HEXBEND_DEFINE_ERROR(PreconditionViolated);
HEXBEND_DEFINE_ERROR(ConfigInvalid);

#undef HEXBEND_DEFINE_ERROR

}  // namespace hexbend
