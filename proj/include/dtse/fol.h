#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtse/signature.h"
#include "dtse/term.h"

namespace dtse {

enum class fol_kind { exists, forall, conj, neg, pred };

enum class fol_sort { entity, event };

struct fol_formula;
using fol_ref = std::shared_ptr<const fol_formula>;

// A first-order formula over individuals of sort entity or event.
// Predicate arguments are names: bound variables or signature constants.
struct fol_formula {
	fol_kind kind;
	// exists/forall: the bound variable and its sort.
	std::string var;
	fol_sort sort = fol_sort::entity;
	// pred: predicate name and arguments.
	std::string name;
	std::vector<std::string> args;
	// exists/forall/neg: a; conj: a and b.
	fol_ref a;
	fol_ref b;
};

fol_ref fol_exists(const std::string& var, fol_sort sort,
                   const fol_ref& body);
fol_ref fol_forall(const std::string& var, fol_sort sort,
                   const fol_ref& body);
fol_ref fol_and(const fol_ref& l, const fol_ref& r);
fol_ref fol_not(const fol_ref& body);
fol_ref fol_pred(const std::string& name,
                 const std::vector<std::string>& args);
// The neutral conjunct, printed as nothing.
fol_ref fol_true();

bool fol_eq(const fol_ref& a, const fol_ref& b);

class untranslatable : public std::runtime_error {
public:
	untranslatable(const std::string& message, term_ref subject)
	    : std::runtime_error(message), subject(std::move(subject)) {}

	term_ref subject;
};

// Reassociates nested pair types outward until every binder either has
// an atomic (entity/event) domain or stands for a proof of a
// proposition, substituting component pairs through dependent bodies.
// Unit-typed binders are eliminated.
term_ref flatten_interpretation(const global_signature& sig,
                                const term_ref& interpretation);

// Translates a closed, well-sorted interpretation type into a formula:
// pair types over atomic domains become existentials, over propositions
// conjunctions; function types become universals; the unit type becomes
// the neutral conjunct. Throws untranslatable outside that fragment.
fol_ref to_fol(const global_signature& sig, const term_ref& interpretation);

// Number of existential quantifiers in the formula.
std::size_t count_exists(const fol_ref& f);

// Renders the formula; a quantifier scopes as far right as it can.
std::string fol_to_string(const fol_ref& f);

// Parses fol_to_string's output back into a formula.
fol_ref fol_parse(const std::string& text);

// The comparison form: conjunctions flattened and sorted with bound
// occurrences blanked, neutral conjuncts dropped, variables renamed in
// traversal order (e1, e2, …/x1, x2, …).
fol_ref canonical_fol(const fol_ref& f);

// Equality up to variable renaming and conjunct order.
bool fol_equivalent(const fol_ref& a, const fol_ref& b);

} // namespace dtse
