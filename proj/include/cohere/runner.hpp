#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cohere/document.hpp"

namespace cohere {

/**
 * Exit codes: 0 success or coherent; 1 incoherent, Dutch book found or
 * incoherent premises; 2 parse or validation error; 3 cap exceeded; 4 any
 * other engine failure, including a closed-form/engine disagreement in mp.
 */
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int incoherent = 1;
inline constexpr int invalid = 2;
inline constexpr int cap_exceeded = 3;
inline constexpr int engine_failure = 4;
}  // namespace exit_code

struct RunOptions
{
    /// Overrides the document's query kind when set.
    std::optional<QueryKind> kind;
    /// Overrides the document's query target when set.
    ExprPtr target;
    unsigned tolerance_exponent = 20;
    std::size_t family_cap = 12;
    bool json = false;
    /// table: print numeric entries (off-support ones in brackets) instead of polynomials.
    bool values = false;
};

struct Report
{
    int exit_code = exit_code::ok;
    std::string text;
};

/// Maps an exception thrown by the library to an exit code.
int exit_code_for(const std::exception& e);

/// Runs the document's query (check when it has none). Never throws.
Report run(const AssessmentDocument& doc, const RunOptions& options = {});

/// Parses and runs. Never throws.
Report run_text(std::string_view text, const RunOptions& options = {});

/// Closed-form modus ponens bounds, cross-checked against the generic engine. Never throws.
Report run_mp(const Rational& x, const Rational& y, bool classical, const RunOptions& options = {});

}  // namespace cohere
