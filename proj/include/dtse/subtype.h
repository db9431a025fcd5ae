#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtse/normalize.h"
#include "dtse/signature.h"
#include "dtse/term.h"

namespace dtse {

// A type of the form [h : H] P1 x (P2 x ... x Pn) with H an atomic head
// type (entity or event) and each Pi a proposition that may mention the
// head binder. The unit type contributes an empty proposition list, and a
// dependent inner pair (an embedded existential) counts as one
// proposition as a whole.
struct property_chain {
	std::string head_binder;
	term_ref head_type;
	std::vector<term_ref> propositions;
};

class not_a_chain : public std::runtime_error {
public:
	not_a_chain(std::string message, term_ref subject)
	    : std::runtime_error(std::move(message)),
	      subject(std::move(subject)) {}

	term_ref subject;
};

// Decomposes a type into a property chain after normalization. Throws
// not_a_chain when the normal form is not a sigma with an atomic head.
property_chain to_chain(const global_signature& sig, const term_ref& type);

// Rebuilds the canonical type of a chain: propositions right-nested, the
// empty chain closing with the unit type.
term_ref chain_type(const property_chain& chain);

// A subtyping witness: a closed normalized function from source to
// target. Witnesses are explicit terms so every coercion can itself be
// checked; they are never applied silently.
struct coercion {
	term_ref witness;
	term_ref source;
	term_ref target;
};

// Decides coercive subtyping between two types and constructs the
// witness. The positive cases, tried in order:
//
//   - alpha-equal normal forms (identity witness);
//   - function spaces with alpha-equal domains and subtyped results
//     (covariant result only, which is all goal ascriptions need);
//   - property chains with the same head type where the target's
//     propositions form a sub-multiset of the source's (re-pairing
//     witness built from projections);
//   - a pair type whose second component is a subtype of the target
//     (left-drop witness), covering witnesses that carry an auxiliary
//     antecedent in front of their event.
//
// Anything else yields nullopt; subtyping never goes under mismatched
// binders or between unrelated atomic types.
std::optional<coercion> is_subtype(const global_signature& sig,
                                   const term_ref& sub, const term_ref& sup);

// Applies a coercion witness and normalizes the result.
term_ref apply_coercion(const global_signature& sig, const coercion& co,
                        const term_ref& t);

// Named event types of the width hierarchy, for tests and the CLI:
// the bare event chain and its refinements by thematic role.
term_ref event_top_type();
term_ref event_agent_type(term_ref agent);
term_ref event_patient_type(term_ref patient);
term_ref event_both_type(term_ref agent, term_ref patient);
term_ref event_described_type(term_ref nature, term_ref agent);

} // namespace dtse
