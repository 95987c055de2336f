#pragma once

#include <stdexcept>
#include <string>

namespace sawends {

// Every library failure carries a stable machine-readable code; the CLI
// echoes it verbatim in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define SAWENDS_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    };

SAWENDS_DEFINE_ERROR(InvalidVertex)
SAWENDS_DEFINE_ERROR(RadiusTooSmall)
SAWENDS_DEFINE_ERROR(InvalidLetter)
SAWENDS_DEFINE_ERROR(PresentationMismatch)
SAWENDS_DEFINE_ERROR(InvalidPresentation)
SAWENDS_DEFINE_ERROR(InvalidGeneratorSet)
SAWENDS_DEFINE_ERROR(InvalidEndpoint)
SAWENDS_DEFINE_ERROR(UnsupportedParameter)
SAWENDS_DEFINE_ERROR(InvalidParameter)
SAWENDS_DEFINE_ERROR(EmptyInput)
SAWENDS_DEFINE_ERROR(SurgeryConflict)
SAWENDS_DEFINE_ERROR(InvalidAutomorphism)
SAWENDS_DEFINE_ERROR(SpecNotFound)
SAWENDS_DEFINE_ERROR(SpecInvalid)

#undef SAWENDS_DEFINE_ERROR

}  // namespace sawends
