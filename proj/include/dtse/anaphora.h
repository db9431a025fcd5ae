#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtse/subtype.h"
#include "dtse/typecheck.h"

namespace dtse {

enum class role_kind { agent, patient };

// A thematic participant of a harvested event: the entity filling the
// role, plus the projection steps that reach the proof of the role
// proposition inside a value of the chain's type (1 projects the first
// component, 2 the second, applied left to right).
struct participant {
	term_ref entity;
	std::vector<int> proof_path;
};

// An accessible discourse referent: a component of the context type whose
// type is a property chain, addressed by a projection path from the
// context variable. Propositions and participant terms are expressed over
// that variable, with outer pair components already resolved to
// projections.
struct antecedent {
	// Projection steps from the context variable, applied left to right;
	// 1 projects the first component, 2 the second.
	std::vector<int> access_path;
	// The path applied to the context variable.
	term_ref value;
	// The component's type at this path.
	term_ref type;
	property_chain chain;
	// Role participants read off agent/patient propositions of the chain.
	std::map<role_kind, participant> participants;
};

// Applies projection steps (1 = first, 2 = second) to a term.
term_ref apply_path(const term_ref& base, const std::vector<int>& path);

struct harvest_options {
	std::size_t max_depth = 16;
};

// Walks a closed context type and lists every chain-typed component,
// most recent (rightmost) first. `context_var` names the variable the
// paths project from.
std::vector<antecedent> harvest_antecedents(const global_signature& sig,
                                            const term_ref& context_type,
                                            const std::string& context_var,
                                            const harvest_options& opts = {});

class occurrence_not_found : public std::runtime_error {
public:
	explicit occurrence_not_found(const std::string& message)
	    : std::runtime_error(message) {}
};

// Abstracts designated participant occurrences out of a chain, yielding
// the property the replace combinators consume: one designated role gives
// \y. \e. ..., agent and patient together give \y. \z. \e. ... with the
// agent abstracted first. Occurrences not designated stay fixed. Throws
// occurrence_not_found when a designated (role, entity) pair has no
// matching proposition.
term_ref abstract_property(
    const property_chain& chain,
    const std::vector<std::pair<role_kind, term_ref>>& designated);

// A felicity condition: the type an anaphora site's witness must
// inhabit, together with the closed type of its left context.
struct felicity_goal {
	std::size_t index;
	term_ref context_type;
	term_ref goal_type; // (c : context_type) -> ascription
};

enum class reading_label {
	strict,
	sloppy,
	agent_replaced,
	patient_replaced,
	pronominal,
	propositional,
};

const char* to_string(reading_label label);

enum class voice_kind { active, passive };

struct resolution_hints {
	voice_kind voice = voice_kind::active;
	std::size_t max_candidates = 64;
	std::size_t max_depth = 16;
};

struct goal_candidate {
	term_ref witness;
	reading_label label;
};

// Enumerates witnesses for one goal by searching the harvested
// antecedents, ordered most recent antecedent first and, for predicate
// anaphora, the plain reading before the re-created (sloppy) one. Every
// returned witness has been checked against the goal type.
std::vector<goal_candidate> resolve_goal(const global_signature& sig,
                                         const felicity_goal& goal,
                                         const resolution_hints& hints = {});

class no_resolution : public std::runtime_error {
public:
	no_resolution(std::size_t index, const std::string& message)
	    : std::runtime_error(message), index(index) {}

	std::size_t index;
};

class ill_typed_application : public std::runtime_error {
public:
	explicit ill_typed_application(const std::string& message)
	    : std::runtime_error(message) {}
};

// One complete way of resolving every anaphora site of a discourse.
struct resolution {
	std::map<std::size_t, term_ref> assignments;
	std::map<std::size_t, reading_label> labels;
	// Per site, the witness applied to the site's arguments, normalized
	// and promoted: the term that stands in for the site inside the
	// interpretation.
	std::map<std::size_t, term_ref> replacements;
	// The resolved, promoted, normalized type of the discourse, closed
	// over the initial context when that context is the unit type.
	term_ref interpretation;
	// Label of the discourse reading: the most informative site label.
	std::optional<reading_label> label;
};

struct resolve_options {
	std::map<std::size_t, resolution_hints> hints;
	std::size_t max_readings = 0; // 0: no limit
	std::vector<std::string>* trace = nullptr;
	// When set, receives each site's felicity goal (first encounter wins).
	std::map<std::size_t, felicity_goal>* goals = nullptr;
};

// Resolves every anaphora site of `discourse` (a function out of the
// initial context type) against its left context, enumerating readings
// across sites and deduplicating alpha-equivalent interpretations.
// Throws no_resolution when some site has no witness.
std::vector<resolution> resolve_discourse(const global_signature& sig,
                                          const term_ref& discourse,
                                          const term_ref& initial_context,
                                          const resolve_options& opts = {});

// Rewrites a saturated, well-typed replace application to its symbolic
// event pair. Throws ill_typed_application otherwise.
term_ref delta_replace(const global_signature& sig,
                       const term_ref& application);

} // namespace dtse
