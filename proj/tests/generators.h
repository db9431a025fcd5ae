#pragma once

// Randomized-term machinery shared by the property suites. Everything is
// driven by a seeded mt19937, so failures replay exactly.

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dtse/fragment.h"
#include "dtse/normalize.h"
#include "dtse/subtype.h"
#include "dtse/typecheck.h"

namespace testgen {

using namespace dtse;

struct rng {
	std::mt19937 gen;

	explicit rng(unsigned seed) : gen(seed) {}

	std::size_t below(std::size_t n) {
		return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
	}

	bool coin() { return below(2) == 0; }

	template <typename T>
	const T& pick(const std::vector<T>& xs) {
		return xs[below(xs.size())];
	}
};

inline const std::vector<std::string>& entity_constants() {
	static const std::vector<std::string> cs = {"j", "m", "f", "b", "a"};
	return cs;
}

inline const std::vector<std::string>& event_natures() {
	static const std::vector<std::string> ns = {"left", "walk",  "entered",
	                                            "like", "loved", "ate"};
	return ns;
}

inline const std::vector<std::string>& entity_predicates() {
	static const std::vector<std::string> ps = {"female", "male", "slow",
	                                            "flood",  "man",  "hat"};
	return ps;
}

// A (term, type) pair valid by construction: checkType(t, ty) succeeds in
// the generator's signature, with every binder in `env` in scope.
struct typed_value {
	term_ref t;
	term_ref ty;
};

// Generates well-typed open terms over a scratch copy of the fragment
// signature. Proposition proofs are axiomatized: each needed closed
// proposition gets a fresh opaque constant. The scratch event constants
// ev0/ev1 inhabit `event`, which has no closed constructor of its own.
struct typed_gen {
	rng& r;
	global_signature sig;
	std::size_t axioms = 0;
	std::size_t binders = 0;
	std::vector<std::pair<std::string, term_ref>> env;

	explicit typed_gen(rng& r) : r(r), sig(fragment_signature()) {
		sig.declare("ev0", mk_const("event"));
		sig.declare("ev1", mk_const("event"));
	}

	term_ref axiom(const term_ref& closed_type) {
		const std::string name = "ax!" + std::to_string(++axioms);
		sig.declare(name, closed_type);
		return mk_const(name);
	}

	std::string fresh_binder() {
		return "g" + std::to_string(++binders);
	}

	term_ref closed_entity() {
		return mk_const(r.pick(entity_constants()));
	}

	term_ref closed_event() {
		return mk_const(r.coin() ? "ev0" : "ev1");
	}

	// A closed proposition over declared constants.
	term_ref closed_prop() {
		switch (r.below(4)) {
		case 0:
			return mk_application(mk_const(r.pick(entity_predicates())),
			                      closed_entity());
		case 1:
			return mk_application(mk_const(r.pick(event_natures())),
			                      closed_event());
		case 2:
			return mk_applications(mk_const("agent"),
			                       {closed_event(), closed_entity()});
		default:
			return mk_applications(mk_const("patient"),
			                       {closed_event(), closed_entity()});
		}
	}

	// Domain for a binder: atomic, unit, or a small dependent pair type.
	term_ref domain() {
		switch (r.below(5)) {
		case 0:
			return mk_const("entity");
		case 1:
			return mk_const("event");
		case 2:
			return mk_unit_type();
		case 3:
			return mk_sigma(
			    "x", mk_const("entity"),
			    mk_application(mk_const(r.pick(entity_predicates())),
			                   mk_var("x")));
		default:
			return mk_sigma(
			    "e", mk_const("event"),
			    mk_application(mk_const(r.pick(event_natures())),
			                   mk_var("e")));
		}
	}

	// A closed inhabitant of a domain() type.
	typed_value closed_of(const term_ref& dom) {
		if (dom->kind == term_kind::unit_type) {
			return {mk_const("unit"), dom};
		}
		if (dom->kind == term_kind::constant && dom->name == "entity") {
			return {closed_entity(), dom};
		}
		if (dom->kind == term_kind::constant && dom->name == "event") {
			return {closed_event(), dom};
		}
		// Σ h: atomic. P(h) — inhabit the head, axiomatize the proof.
		term_ref head = dom->a->name == "entity" ? closed_entity()
		                                         : closed_event();
		term_ref prop = substitute(dom->b, dom->name, head);
		return {mk_pair(head, axiom(normalize(sig, prop))), dom};
	}

	// An open, well-typed value of small depth.
	typed_value value(std::size_t depth) {
		// Leaves.
		if (depth == 0 || r.below(3) == 0) {
			std::vector<typed_value> leaves;
			leaves.push_back({closed_entity(), mk_const("entity")});
			leaves.push_back({closed_event(), mk_const("event")});
			leaves.push_back({mk_const("unit"), mk_unit_type()});
			for (const auto& [name, ty] : env) {
				leaves.push_back({mk_var(name), ty});
				if (ty->kind == term_kind::sigma) {
					leaves.push_back({mk_proj1(mk_var(name)), ty->a});
					leaves.push_back(
					    {mk_proj2(mk_var(name)),
					     substitute(ty->b, ty->name,
					                mk_proj1(mk_var(name)))});
				}
			}
			return leaves[r.below(leaves.size())];
		}
		switch (r.below(3)) {
		case 0: {
			// Non-dependent pair.
			typed_value a = value(depth - 1);
			typed_value b = value(depth - 1);
			return {mk_pair(a.t, b.t), mk_sigma("_", a.ty, b.ty)};
		}
		case 1: {
			// Dependent pair with an axiomatized proof component.
			term_ref dom = r.coin()
			                   ? mk_sigma("x", mk_const("entity"),
			                              mk_application(
			                                  mk_const(r.pick(
			                                      entity_predicates())),
			                                  mk_var("x")))
			                   : mk_sigma("e", mk_const("event"),
			                              mk_application(
			                                  mk_const(r.pick(
			                                      event_natures())),
			                                  mk_var("e")));
			return closed_of(dom);
		}
		default: {
			// Lambda over a generated domain.
			term_ref dom = domain();
			const std::string x = fresh_binder();
			env.emplace_back(x, dom);
			typed_value body = value(depth - 1);
			env.pop_back();
			return {mk_lambda(x, body.t), mk_pi(x, dom, body.ty)};
		}
		}
	}
};

// Raw, possibly ill-typed (but well-scoped) terms with redexes, for
// normalization robustness.
struct raw_gen {
	rng& r;
	std::size_t binders = 0;
	std::vector<std::string> scope;

	explicit raw_gen(rng& r) : r(r) {}

	term_ref leaf() {
		if (!scope.empty() && r.coin()) {
			return mk_var(scope[r.below(scope.size())]);
		}
		switch (r.below(3)) {
		case 0:
			return mk_const(r.pick(entity_constants()));
		case 1:
			return mk_const(r.pick(event_natures()));
		default:
			return mk_unit_type();
		}
	}

	term_ref term(std::size_t depth) {
		if (depth == 0) {
			return leaf();
		}
		switch (r.below(8)) {
		case 0: {
			const std::string x = "r" + std::to_string(++binders);
			scope.push_back(x);
			term_ref body = term(depth - 1);
			scope.pop_back();
			return mk_lambda(x, body);
		}
		case 1:
			return mk_application(term(depth - 1), term(depth - 1));
		case 2:
			return mk_pair(term(depth - 1), term(depth - 1));
		case 3:
			return mk_proj1(term(depth - 1));
		case 4:
			return mk_proj2(term(depth - 1));
		case 5: {
			const std::string x = "r" + std::to_string(++binders);
			scope.push_back(x);
			term_ref body = term(depth - 1);
			scope.pop_back();
			return mk_sigma(x, term(depth - 1), body);
		}
		case 6: {
			const std::string x = "r" + std::to_string(++binders);
			scope.push_back(x);
			term_ref body = term(depth - 1);
			scope.pop_back();
			return mk_pi(x, term(depth - 1), body);
		}
		default:
			return leaf();
		}
	}
};

// Property-chain generator for the subtyping suites.
struct chain_gen {
	rng& r;

	explicit chain_gen(rng& r) : r(r) {}

	// Distinct propositions over the head binder `h`.
	std::vector<term_ref> props(bool event_head, const std::string& h,
	                            std::size_t count) {
		std::vector<term_ref> pool;
		const term_ref hv = mk_var(h);
		if (event_head) {
			for (const auto& n : event_natures()) {
				pool.push_back(mk_application(mk_const(n), hv));
			}
			for (const auto& k : entity_constants()) {
				pool.push_back(
				    mk_applications(mk_const("agent"), {hv, mk_const(k)}));
				pool.push_back(mk_applications(mk_const("patient"),
				                               {hv, mk_const(k)}));
			}
			pool.push_back(mk_applications(mk_const("in"),
			                               {hv, mk_const("canberra")}));
			pool.push_back(
			    mk_applications(mk_const("in"), {hv, mk_const("london")}));
		} else {
			for (const auto& p : entity_predicates()) {
				pool.push_back(mk_application(mk_const(p), hv));
			}
			for (const auto& k : entity_constants()) {
				pool.push_back(
				    mk_applications(mk_const("owner"), {hv, mk_const(k)}));
			}
		}
		// Sample without replacement.
		std::vector<term_ref> out;
		std::vector<std::size_t> idx(pool.size());
		for (std::size_t i = 0; i < idx.size(); ++i) {
			idx[i] = i;
		}
		for (std::size_t i = 0; i < count && !idx.empty(); ++i) {
			std::size_t j = r.below(idx.size());
			out.push_back(pool[idx[j]]);
			idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(j));
		}
		return out;
	}

	property_chain chain(bool event_head, std::size_t prop_count) {
		property_chain c;
		c.head_binder = event_head ? "e" : "x";
		c.head_type = mk_const(event_head ? "event" : "entity");
		c.propositions = props(event_head, c.head_binder, prop_count);
		return c;
	}

	// Keeps a subsequence of `base`'s propositions; drops at least
	// `min_drop` of them.
	property_chain narrowed(const property_chain& base,
	                        std::size_t min_drop) {
		property_chain c;
		c.head_binder = base.head_binder;
		c.head_type = base.head_type;
		std::vector<std::size_t> keep;
		for (std::size_t i = 0; i < base.propositions.size(); ++i) {
			keep.push_back(i);
		}
		std::size_t drops =
		    min_drop + (keep.empty() ? 0 : r.below(keep.size() + 1));
		drops = std::min(drops, keep.size());
		for (std::size_t i = 0; i < drops && !keep.empty(); ++i) {
			keep.erase(keep.begin() +
			           static_cast<std::ptrdiff_t>(r.below(keep.size())));
		}
		for (std::size_t i : keep) {
			c.propositions.push_back(base.propositions[i]);
		}
		return c;
	}

	// A closed inhabitant of the chain's type, with axiomatized proofs.
	term_ref inhabitant(global_signature& sig, std::size_t& axioms,
	                    const property_chain& c) {
		const bool event_head = c.head_type->name == "event";
		term_ref head = mk_const(event_head ? "ev0" : "j");
		term_ref rest = mk_const("unit");
		if (!c.propositions.empty()) {
			std::vector<term_ref> proofs;
			for (const auto& p : c.propositions) {
				term_ref closed = normalize(
				    sig, substitute(p, c.head_binder, head));
				const std::string name =
				    "ax!" + std::to_string(++axioms);
				sig.declare(name, closed);
				proofs.push_back(mk_const(name));
			}
			rest = proofs.back();
			for (std::size_t i = proofs.size() - 1; i-- > 0;) {
				rest = mk_pair(proofs[i], rest);
			}
		}
		return mk_pair(head, rest);
	}
};

} // namespace testgen
