#pragma once

#include <stdexcept>
#include <string>

namespace vcsra {

/// Base class for every error raised by the library. `category()` is a short
/// machine-readable tag that the CLI prints alongside the message.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define VCSRA_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(#Name, what) {}   \
    }

VCSRA_DEFINE_ERROR(DomainError);
VCSRA_DEFINE_ERROR(DimensionError);
VCSRA_DEFINE_ERROR(NonPowerOfTwo);
VCSRA_DEFINE_ERROR(SingularMatrix);
VCSRA_DEFINE_ERROR(ModelMismatch);
VCSRA_DEFINE_ERROR(CodeTooShort);
VCSRA_DEFINE_ERROR(AdmissionExhausted);
VCSRA_DEFINE_ERROR(DegenerateThreshold);
VCSRA_DEFINE_ERROR(InfeasibleTarget);
VCSRA_DEFINE_ERROR(ConfigError);
VCSRA_DEFINE_ERROR(UnknownFigure);

#undef VCSRA_DEFINE_ERROR

/// Malformed configuration text. Carries the offending line (1-based, 0 when
/// the error comes from an inline override) and field name.
class ParseError : public Error {
public:
    ParseError(int line, std::string field, const std::string& what)
        : Error("ParseError", what), line_(line), field_(std::move(field)) {}

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

/// A parsed configuration violates a scenario invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("ValidationError", what) {}
};

}  // namespace vcsra
