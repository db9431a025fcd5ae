#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtse/term.h"

namespace dtse {

// Ordered list of typed binders, innermost last. Used as the local context
// of the checker and of the anaphora engine's walk over a discourse.
class telescope {
public:
	struct entry {
		std::string name;
		term_ref type;
	};

	telescope() = default;

	// Value-semantics extension; the receiver is untouched.
	[[nodiscard]] telescope extended(std::string name, term_ref type) const;

	// Innermost binding of `name`, if any.
	std::optional<term_ref> lookup(const std::string& name) const;

	const std::vector<entry>& entries() const { return entries_; }
	bool empty() const { return entries_.empty(); }

private:
	std::vector<entry> entries_;
};

// State handed to a delta rule so it can mint fresh symbolic names.
struct delta_state {
	std::size_t counter = 0;
};

// A delta rule rewrites a saturated application spine headed by its
// constant. It receives exactly the constant's declared number of
// arguments and either produces a replacement term or declines.
using delta_rule = std::function<std::optional<term_ref>(
    std::span<const term_ref> args, delta_state& state)>;

// Global signature: constant declarations plus optional delta rules.
// Extension is by value so checker calls can locally grow a signature
// without disturbing callers.
class global_signature {
public:
	void declare(std::string name, term_ref type);
	void declare_delta(std::string name, term_ref type, std::size_t arity,
	                   delta_rule rule);

	std::optional<term_ref> lookup(const std::string& name) const;

	struct delta_entry {
		std::size_t arity;
		delta_rule rule;
	};
	const delta_entry* delta_for(const std::string& name) const;

	bool declared(const std::string& name) const;
	const std::map<std::string, term_ref>& constants() const {
		return constants_;
	}

private:
	std::map<std::string, term_ref> constants_;
	std::map<std::string, delta_entry> deltas_;
};

// Names of the combinators that rebuild an event around new participants.
inline constexpr const char* replace_agent_name = "replaceA";
inline constexpr const char* replace_patient_name = "replaceP";
inline constexpr const char* replace_both_name = "replaceAP";

bool is_replace_constant(const std::string& name);

// The base signature of the event fragment: the atomic types `entity` and
// `event`, thematic roles, the unit inhabitant, and the three replace
// combinators with their symbolic delta rules. Lexical material (names,
// predicates, gender facts) is layered on top by the fragment module.
global_signature base_signature();

} // namespace dtse
