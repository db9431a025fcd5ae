#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dtse/normalize.h"
#include "dtse/signature.h"
#include "dtse/subtype.h"
#include "dtse/term.h"

namespace dtse {

enum class type_error_kind {
	unbound_variable,
	sort_mismatch,
	not_a_function,
	not_a_pair,
	mismatch,
	illegal_sort_pair,
};

const char* to_string(type_error_kind kind);

class type_error : public std::runtime_error {
public:
	type_error(type_error_kind kind, std::string location, term_ref subject,
	           term_ref expected, term_ref found, const std::string& detail);

	type_error_kind error_kind;
	// Dotted path from the checked term to the offending subterm, e.g.
	// "body.fn.arg"; empty at the root.
	std::string location;
	term_ref subject;
	term_ref expected; // may be null
	term_ref found;    // may be null
};

struct check_options {
	// Route mismatched boundaries through coercive subtyping. Also gates
	// the acceptance of type-valued terms against wider types.
	bool use_subtyping = true;
	// Accept applied anaphora sites and saturated replace applications in
	// type positions, standing for their result types.
	bool allow_promotion = true;
	normalize_options norm;
};

// The sort classifying a type: `type` for ordinary types, `kind` for
// function spaces into `type` and for `type` itself. Sigma formation over
// a kind-sorted first component with a type-sorted second is rejected;
// every other combination, and all four pi combinations, are legal.
sort_kind infer_sort(const global_signature& sig, const telescope& tel,
                     const term_ref& type, const check_options& opts = {});

// Principal type of an inferable term (variables, constants, sorts,
// applications, projections, and the type formers), in normal form.
// Bare lambdas and pairs do not infer; they are checked.
term_ref infer_type(const global_signature& sig, const telescope& tel,
                    const term_ref& t, const check_options& opts = {});

struct check_result {
	// The checked term; where a coercion bridged the boundary, the
	// witness application is recorded here around the original term.
	term_ref elaborated;
	// Top-level coercion used at the boundary, if any.
	std::optional<coercion> used;
};

// Checks t against an expected type (which must be well-formed). Equality
// is alpha-equivalence of normal forms; failing that, the subtyping and
// promotion rules of `opts` apply.
check_result check_type(const global_signature& sig, const telescope& tel,
                        const term_ref& t, const term_ref& expected,
                        const check_options& opts = {});

// Rewrites type-valued application spines (applied anaphora sites,
// saturated replace applications) inside a type to the types they stand
// for. Other structure is preserved.
term_ref deep_promote(const global_signature& sig, const telescope& tel,
                      const term_ref& type, const check_options& opts = {});

// True when t is an application spine that promotes to its result type:
// an applied anaphora site or an exactly saturated replace application.
bool promotable_spine(const global_signature& sig, const term_ref& t);

} // namespace dtse
