#pragma once

#include <string>
#include <string_view>

#include "ttalign/term.hpp"

namespace ttalign {

// Canonical one-line form:
//   T ::= (Id STR) | (Comb T T) | (Abs STR T T)
// STR is double-quoted; `"` and `\` are backslash-escaped.
//
// The form carries no constant/variable flag. When reading, an Id whose name
// is bound by an enclosing Abs is a variable and every other Id is a
// constant, so free variables come back as constants.

std::string to_sexp(const Term& term);
void append_sexp(std::string& out, const Term& term);

/// Throws ParseError (line 1, column = byte offset + 1) on malformed input or
/// constructor arity mismatch.
TermPtr parse_sexp(std::string_view line);

}  // namespace ttalign
