#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohere {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/** Family size or atom count exceeds the configured desk-scale limit. */
class CapExceeded : public Error
{
    public:
        using Error::Error;
};

/** An event references an atom that is not in the registry. */
class UnknownAtom : public Error
{
    public:
        using Error::Error;
};

/** A conditional was built on an impossible conditioning event. */
class ImpossibleConditioningEvent : public Error
{
    public:
        using Error::Error;
};

/** A payoff or support rule needs a prevision symbol the valuation lacks. */
class MissingSymbol : public Error
{
    public:
        using Error::Error;
};

class PreconditionFailed : public Error
{
    public:
        using Error::Error;
};

/** Every bet of a subfamily is called off under the valuation. */
class EmptySupport : public Error
{
    public:
        using Error::Error;
};

class DimensionMismatch : public Error
{
    public:
        using Error::Error;
};

class OutOfRange : public Error
{
    public:
        using Error::Error;
};

class IncoherentPremises : public Error
{
    public:
        using Error::Error;
};

/**
 * The coherent extensions of a target could not be located or do not form
 * an interval at the configured resolution.
 */
class ExtensionError : public Error
{
    public:
        using Error::Error;
};

/** Conflicting or malformed prevision assignments inside an assessment. */
class InvalidAssessment : public Error
{
    public:
        using Error::Error;
};

class UndeclaredAtom : public Error
{
    public:
        using Error::Error;
};

/** Syntax error in an assessment document, with a 1-based position. */
class ParseError : public Error
{
    public:
        ParseError(std::size_t line, std::size_t column, const std::string& message)
            : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
              line_(line), column_(column) {}

        std::size_t line() const { return line_; }
        std::size_t column() const { return column_; }

    private:
        std::size_t line_;
        std::size_t column_;
};

}  // namespace cohere
