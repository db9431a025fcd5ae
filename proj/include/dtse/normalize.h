#pragma once

#include <cstddef>
#include <stdexcept>

#include "dtse/signature.h"
#include "dtse/term.h"

namespace dtse {

// Thrown when a reduction exceeds its step budget. The budget is a
// safeguard against runaway delta rules and ill-typed self-application;
// well-typed terms of this calculus normalize long before reaching it.
class depth_exceeded : public std::runtime_error {
public:
	explicit depth_exceeded(std::size_t budget)
	    : std::runtime_error("normalization exceeded " +
	                         std::to_string(budget) + " reduction steps"),
	      budget(budget) {}

	std::size_t budget;
};

struct normalize_options {
	std::size_t max_steps = 10000;
	// Delta rules rewrite saturated replace applications to symbolic
	// events. Disable to watch such applications stay stuck.
	bool use_delta = true;
};

// Full beta / projection / delta normalization, leftmost-outermost.
// Anaphora sites are inert: an applied @-operator never reduces. The
// result is unique up to alpha-equivalence.
term_ref normalize(const global_signature& sig, const term_ref& t,
                   const normalize_options& opts = {});

// Head normalization only: enough steps to expose the outermost
// constructor. Shares the step budget semantics of normalize.
term_ref head_normalize(const global_signature& sig, const term_ref& t,
                        const normalize_options& opts = {});

} // namespace dtse
