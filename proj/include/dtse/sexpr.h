#pragma once

#include <stdexcept>
#include <string>

#include "dtse/term.h"

namespace dtse {

class parse_error : public std::runtime_error {
public:
	parse_error(std::string message, std::size_t line, std::size_t column)
	    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
	                         std::to_string(column) + ": " + message),
	      line(line), column(column) {}

	std::size_t line;
	std::size_t column;
};

// Reads one term from its s-expression form:
//
//   t ::= name | type | kind | ()
//       | (pi (x t) t) | (sigma (x t) t) | (times t t)
//       | (lam x t) | (pair t t) | (p1 t) | (p2 t)
//       | (at n t)                    ; anaphora site, n a positive index
//       | (t t ...)                   ; application, left associated
//
// `times` is the non-dependent sigma. Names bound by an enclosing pi,
// sigma or lam occurrence read back as variables, all other names as
// signature constants; the head words above are reserved. `;` starts a
// comment running to end of line.
term_ref parse_term(const std::string& text);

// Prints a term in the form parse_term reads. parse_term(print_term(t))
// equals t up to alpha-equivalence whenever every free name of t is meant
// as a constant.
std::string print_term(const term_ref& t);

// Human-oriented rendering used by reports and traces: angle-bracket
// pairs, arrows for function spaces, predicate application f(a, b).
std::string display_term(const term_ref& t);

} // namespace dtse
