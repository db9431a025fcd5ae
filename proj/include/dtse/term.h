#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtse {

// The two sorts of the calculus. Every well-formed type lives in `type`,
// every well-formed kind (such as `type` itself, or a function space whose
// codomain is `type`) lives in `kind`. `kind` has no classifier.
enum class sort_kind { type, kind };

enum class term_kind {
	variable,    // named variable bound by pi / sigma / lambda
	constant,    // name declared in a global_signature
	sort,        // `type` or `kind`
	pi,          // (x : A) -> B, dependent function space
	sigma,       // [x : A] B, dependent pair type
	lambda,      // \x. M (unannotated; lambdas are checked, not inferred)
	application, // M N
	pair,        // (M, N)
	proj1,       // first projection
	proj2,       // second projection
	at_op,       // anaphora site @_i with its ascribed result type
	unit_type,   // the canonical empty context type
};

class term;
using term_ref = std::shared_ptr<const term>;

// Immutable term node. Nodes are shared freely; all operations build new
// terms instead of mutating. Terms are identified up to alpha-equivalence:
// every comparison in the library goes through alpha_eq, never through
// pointer or representation equality.
class term {
public:
	term_kind kind;

	// variable / constant: the name. pi / sigma / lambda: the binder.
	std::string name;

	// Meaningful for term_kind::sort only.
	sort_kind sort = sort_kind::type;

	// Meaningful for term_kind::at_op only: the 1-based anaphora index.
	std::size_t index = 0;

	// pi / sigma: domain resp. first component type.
	// application: function. pair: first. proj1 / proj2: subject.
	// at_op: ascribed result type.
	term_ref a;

	// pi / sigma: codomain resp. second component type (may use the binder).
	// lambda: body. application: argument. pair: second.
	term_ref b;
};

term_ref mk_var(std::string name);
term_ref mk_const(std::string name);
term_ref mk_sort(sort_kind s);
term_ref mk_pi(std::string binder, term_ref domain, term_ref codomain);
term_ref mk_sigma(std::string binder, term_ref first, term_ref second);
term_ref mk_lambda(std::string binder, term_ref body);
term_ref mk_application(term_ref fn, term_ref arg);
term_ref mk_applications(term_ref fn, const std::vector<term_ref>& args);
term_ref mk_pair(term_ref first, term_ref second);
term_ref mk_proj1(term_ref subject);
term_ref mk_proj2(term_ref subject);
term_ref mk_at_op(std::size_t index, term_ref ascription);
term_ref mk_unit_type();

// Names free in t. Binders shadow as usual.
std::set<std::string> free_vars(const term_ref& t);

// Capture-avoiding substitution of `replacement` for free occurrences of
// the variable `name` in `body`. Binders are renamed (with prime suffixes)
// whenever they would capture a free name of the replacement.
term_ref substitute(const term_ref& body, const std::string& name,
                    const term_ref& replacement);

// Structural equality up to renaming of bound variables. This is the
// equality of the library: two alpha-equivalent terms are the same term.
bool alpha_eq(const term_ref& lhs, const term_ref& rhs);

// True when some subterm of t is alpha-equivalent to `needle`.
bool contains_subterm(const term_ref& t, const term_ref& needle);

// Replaces every subterm of t alpha-equivalent to `needle` by `replacement`.
// The caller must pick `replacement` free of capture against t's binders
// (in practice: a globally fresh variable).
term_ref replace_subterm(const term_ref& t, const term_ref& needle,
                         const term_ref& replacement);

// A name based on `base` (priming it as often as needed) that avoids every
// name in `taken`.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& taken);

// Decomposes nested applications: spine(((f a) b)) yields f and {a, b}.
// For terms that are not applications, head is the term itself and the
// argument list is empty.
struct spine_view {
	term_ref head;
	std::vector<term_ref> args;
};
spine_view spine(const term_ref& t);

} // namespace dtse
