#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dtse/anaphora.h"
#include "dtse/fol.h"
#include "dtse/signature.h"
#include "dtse/term.h"

namespace dtse {

// One anaphora site's felicity condition, as reported to the user.
struct goal_summary {
	std::size_t index = 0;
	term_ref context_type;
	term_ref goal_type;
};

// One way of resolving the discourse, with its display formula.
struct reading_entry {
	std::string label;
	fol_ref formula;
	term_ref interpretation;
};

// Everything a resolution run produced, in display order.
struct run_report {
	std::string source;
	std::vector<goal_summary> goals;
	std::vector<reading_entry> readings;
};

// Human-readable rendering.
std::string report_text(const run_report& report);

// Machine-readable rendering. The schema is an object with
//   source: string — the discourse text as read;
//   goals: array of {index, context, goal} with types in term syntax;
//   readings: array of {label, formula, interpretation}.
// Serializing, parsing, and serializing again yields the same document.
std::string report_json(const run_report& report);

// Parses report_json output back into a report.
run_report report_from_json(const std::string& text);

} // namespace dtse
