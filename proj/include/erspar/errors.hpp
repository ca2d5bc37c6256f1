#ifndef ERSPAR_ERRORS_HPP
#define ERSPAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace erspar {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define ERSPAR_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg) : Error(msg) {}       \
    }

ERSPAR_DEFINE_ERROR(ParseError);
ERSPAR_DEFINE_ERROR(SelfLoop);
ERSPAR_DEFINE_ERROR(DuplicateEdge);
ERSPAR_DEFINE_ERROR(NonPositiveWeight);
ERSPAR_DEFINE_ERROR(IndexOutOfRange);
ERSPAR_DEFINE_ERROR(EmptyGraph);
ERSPAR_DEFINE_ERROR(Disconnected);
ERSPAR_DEFINE_ERROR(NoConvergence);
ERSPAR_DEFINE_ERROR(NotPSD);
ERSPAR_DEFINE_ERROR(KernelMismatch);
ERSPAR_DEFINE_ERROR(OutOfRange);
ERSPAR_DEFINE_ERROR(LengthMismatch);
ERSPAR_DEFINE_ERROR(SeedOutOfRange);
ERSPAR_DEFINE_ERROR(TooLarge);
ERSPAR_DEFINE_ERROR(Overflow);
ERSPAR_DEFINE_ERROR(ZeroProbabilityEdge);
ERSPAR_DEFINE_ERROR(InsufficientCoins);

#undef ERSPAR_DEFINE_ERROR

} // namespace erspar

#endif
